"""Exception hierarchy. The CLI maps each family onto an exit code."""


class StegoError(Exception):
    pass


class FormatError(StegoError):
    """Malformed or unreadable video / sidecar data."""


class UnsupportedFormatError(FormatError):
    pass


class TruncationError(FormatError):
    def __init__(self, message: str, frame_index: int | None = None):
        super().__init__(message)
        self.frame_index = frame_index


class SidecarError(FormatError):
    pass


class BadMagicError(SidecarError):
    pass


class VersionMismatchError(SidecarError):
    pass


class RecordCountError(SidecarError):
    pass


class DeltaRangeError(SidecarError):
    pass


class DimensionMismatchError(FormatError, ValueError):
    """Sidecar header or video pair disagree on width/height/frame count."""


class CapacityError(StegoError):
    def __init__(self, message: str, max_payload: int | None = None):
        super().__init__(message)
        self.max_payload = max_payload


class ExhaustionError(StegoError):
    """No candidate pixels left to search."""


class IntegrityError(StegoError):
    """Wrong password or corrupted extraction."""


class CorruptionError(IntegrityError):
    pass
