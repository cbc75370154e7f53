"""GA-driven luma steganography for uncompressed YUV video."""

from stegano_ga.errors import (
    CapacityError,
    CorruptionError,
    DimensionMismatchError,
    ExhaustionError,
    FormatError,
    IntegrityError,
    SidecarError,
    StegoError,
    TruncationError,
    UnsupportedFormatError,
)
from stegano_ga.video_io import Frame, VideoSequence, parse_y4m, read_raw_i420, write_raw_i420, write_y4m

__all__ = [
    "CapacityError",
    "CorruptionError",
    "DimensionMismatchError",
    "ExhaustionError",
    "FormatError",
    "Frame",
    "IntegrityError",
    "SidecarError",
    "StegoError",
    "TruncationError",
    "UnsupportedFormatError",
    "VideoSequence",
    "parse_y4m",
    "read_raw_i420",
    "write_raw_i420",
    "write_y4m",
]

__version__ = "0.1.0"
