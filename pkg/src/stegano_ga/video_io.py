"""Uncompressed 4:2:0 video containers: YUV4MPEG2 (Y4M) and headerless I420.

Frames are held fully in memory as numpy ``uint8`` planes. Only the luma
plane is ever modified by the embedding code; chroma passes through.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import BinaryIO, Union

import numpy as np

from stegano_ga.errors import FormatError, TruncationError, UnsupportedFormatError

Y4M_SIGNATURE = b"YUV4MPEG2"
FRAME_MARKER = b"FRAME"
SUPPORTED_CHROMA = ("420", "420jpeg", "420mpeg2")

ByteSource = Union[bytes, bytearray, memoryview, BinaryIO]


def _check_dims(width: int, height: int) -> None:
    if width <= 0 or height <= 0 or width % 2 or height % 2:
        raise ValueError(f"width and height must be even and positive, got {width}x{height}")


@dataclass(eq=False)
class Frame:
    """One 4:2:0 picture. Planes are row-major ``(rows, cols)`` uint8 arrays."""

    y: np.ndarray
    u: np.ndarray
    v: np.ndarray
    # raw bytes following the FRAME token (leading space included), kept for round-trips
    params: bytes = b""

    @classmethod
    def blank(cls, width: int, height: int, luma: int = 0, chroma: int = 128) -> Frame:
        return cls(
            np.full((height, width), luma, dtype=np.uint8),
            np.full((height // 2, width // 2), chroma, dtype=np.uint8),
            np.full((height // 2, width // 2), chroma, dtype=np.uint8),
        )

    def copy(self) -> Frame:
        return Frame(self.y.copy(), self.u.copy(), self.v.copy(), self.params)

    def tobytes(self) -> bytes:
        return self.y.tobytes() + self.u.tobytes() + self.v.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.params == other.params
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
        )


@dataclass(eq=False)
class VideoSequence:
    width: int
    height: int
    frames: list[Frame] = field(default_factory=list)
    frame_rate: tuple[int, int] = (25, 1)
    # chroma tag suffix as read ("420", "420jpeg", ...); None when the header had no C token
    chroma: str | None = "420"
    # verbatim header tokens in file order; empty for sequences built in code
    header_tokens: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _check_dims(self.width, self.height)
        for i, frame in enumerate(self.frames):
            self._check_frame(i, frame)

    def _check_frame(self, index: int, frame: Frame) -> None:
        cshape = (self.height // 2, self.width // 2)
        if frame.y.shape != (self.height, self.width) or frame.u.shape != cshape or frame.v.shape != cshape:
            raise ValueError(f"frame {index} planes do not match {self.width}x{self.height} 4:2:0 layout")
        if frame.y.dtype != np.uint8 or frame.u.dtype != np.uint8 or frame.v.dtype != np.uint8:
            raise ValueError(f"frame {index} planes must be uint8")

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def frame_size(self) -> int:
        return self.width * self.height * 3 // 2

    def append(self, frame: Frame) -> None:
        self._check_frame(len(self.frames), frame)
        self.frames.append(frame)

    def copy(self) -> VideoSequence:
        return VideoSequence(
            self.width,
            self.height,
            [f.copy() for f in self.frames],
            self.frame_rate,
            self.chroma,
            self.header_tokens,
        )

    def same_shape(self, other: VideoSequence) -> bool:
        return (self.width, self.height, self.frame_count) == (other.width, other.height, other.frame_count)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VideoSequence):
            return NotImplemented
        return (
            self.same_shape(other)
            and self.frame_rate == other.frame_rate
            and self.chroma == other.chroma
            and self.header_tokens == other.header_tokens
            and all(a == b for a, b in zip(self.frames, other.frames))
        )

    def planes_equal(self, other: VideoSequence) -> bool:
        """Sample-level equality, ignoring container metadata."""
        return self.same_shape(other) and all(
            np.array_equal(a.y, b.y) and np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)
            for a, b in zip(self.frames, other.frames)
        )


def _read_all(stream: ByteSource) -> bytes:
    if isinstance(stream, (bytes, bytearray, memoryview)):
        return bytes(stream)
    return stream.read()


def _split_frame(buf: memoryview, offset: int, width: int, height: int, params: bytes = b"") -> Frame:
    ysize = width * height
    csize = ysize // 4
    y = np.frombuffer(buf, np.uint8, ysize, offset).reshape(height, width).copy()
    u = np.frombuffer(buf, np.uint8, csize, offset + ysize).reshape(height // 2, width // 2).copy()
    v = np.frombuffer(buf, np.uint8, csize, offset + ysize + csize).reshape(height // 2, width // 2).copy()
    return Frame(y, u, v, params)


def _parse_header(line: bytes) -> VideoSequence:
    if not line.startswith(Y4M_SIGNATURE) or line[len(Y4M_SIGNATURE) : len(Y4M_SIGNATURE) + 1] not in (b" ", b""):
        raise FormatError("missing YUV4MPEG2 signature")
    try:
        tokens = tuple(t for t in line[len(Y4M_SIGNATURE) :].decode("ascii").split(" ") if t)
    except UnicodeDecodeError as exc:
        raise FormatError("non-ASCII Y4M header") from exc

    width = height = None
    rate = (25, 1)
    chroma = None
    try:
        for tok in tokens:
            key, val = tok[0], tok[1:]
            if key == "W":
                width = int(val)
            elif key == "H":
                height = int(val)
            elif key == "F":
                num, den = val.split(":")
                rate = (int(num), int(den))
            elif key == "C":
                chroma = val
    except ValueError as exc:
        raise FormatError(f"bad Y4M header token: {exc}") from exc
    if width is None or height is None:
        raise FormatError("Y4M header lacks W or H")
    if chroma is not None and chroma not in SUPPORTED_CHROMA:
        raise UnsupportedFormatError(f"unsupported chroma sampling C{chroma}; only 4:2:0 is handled")
    try:
        return VideoSequence(width, height, [], rate, chroma, tokens)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def parse_y4m(stream: ByteSource) -> VideoSequence:
    data = _read_all(stream)
    nl = data.find(b"\n")
    if nl < 0:
        if data.startswith(Y4M_SIGNATURE):
            raise TruncationError("Y4M header is not newline-terminated")
        raise FormatError("missing YUV4MPEG2 signature")
    seq = _parse_header(data[:nl])
    buf = memoryview(data)
    size = seq.frame_size
    pos = nl + 1
    index = 0
    while pos < len(data):
        if data[pos : pos + len(FRAME_MARKER)] != FRAME_MARKER:
            raise FormatError(f"expected FRAME marker for frame {index} at byte {pos}")
        eol = data.find(b"\n", pos)
        if eol < 0:
            raise TruncationError(f"frame {index} header is truncated", index)
        params = data[pos + len(FRAME_MARKER) : eol]
        if params and not params.startswith(b" "):
            raise FormatError(f"malformed FRAME marker for frame {index}")
        start = eol + 1
        if start + size > len(data):
            raise TruncationError(
                f"frame {index} is truncated: {len(data) - start} of {size} bytes present", index
            )
        seq.frames.append(_split_frame(buf, start, seq.width, seq.height, params))
        pos = start + size
        index += 1
    return seq


def _header_line(seq: VideoSequence) -> bytes:
    fresh = {
        "W": f"W{seq.width}",
        "H": f"H{seq.height}",
        "F": f"F{seq.frame_rate[0]}:{seq.frame_rate[1]}",
        "C": f"C{seq.chroma}" if seq.chroma is not None else None,
    }
    out = []
    seen = set()
    for tok in seq.header_tokens:
        key = tok[0]
        if key in fresh:
            seen.add(key)
            if fresh[key] is not None:
                out.append(fresh[key])
        else:
            out.append(tok)
    for key in "WHFC":
        if key not in seen and fresh[key] is not None and not (key == "F" and seq.header_tokens):
            out.append(fresh[key])
    return Y4M_SIGNATURE + b" " + " ".join(out).encode("ascii") + b"\n"


def write_y4m(seq: VideoSequence, sink: BinaryIO | None = None) -> int | bytes:
    """Serialize ``seq``. Returns the byte count, or the bytes themselves when no sink is given."""
    chunks = [_header_line(seq)]
    for frame in seq.frames:
        chunks.append(FRAME_MARKER + frame.params + b"\n")
        chunks.append(frame.tobytes())
    if sink is None:
        return b"".join(chunks)
    total = 0
    for chunk in chunks:
        sink.write(chunk)
        total += len(chunk)
    return total


def read_raw_i420(stream: ByteSource, width: int, height: int) -> VideoSequence:
    _check_dims(width, height)
    data = _read_all(stream)
    size = width * height * 3 // 2
    if len(data) % size:
        raise TruncationError(
            f"{len(data)} bytes is not a whole number of {width}x{height} I420 frames ({size} bytes each)",
            len(data) // size,
        )
    buf = memoryview(data)
    frames = [_split_frame(buf, off, width, height) for off in range(0, len(data), size)]
    return VideoSequence(width, height, frames)


def write_raw_i420(seq: VideoSequence, sink: BinaryIO | None = None) -> int | bytes:
    data = b"".join(f.tobytes() for f in seq.frames)
    if sink is None:
        return data
    sink.write(data)
    return len(data)


def is_y4m(path: str | os.PathLike) -> bool:
    with open(path, "rb") as fh:
        return fh.read(len(Y4M_SIGNATURE)) == Y4M_SIGNATURE


def load_video(path: str | os.PathLike, width: int | None = None, height: int | None = None) -> VideoSequence:
    """Read a Y4M file, or raw I420 when ``width``/``height`` are supplied."""
    with open(path, "rb") as fh:
        data = fh.read()
    if width is not None or height is not None:
        if width is None or height is None:
            raise ValueError("raw I420 input needs both width and height")
        return read_raw_i420(data, width, height)
    return parse_y4m(data)


def dump_video(seq: VideoSequence, raw: bool = False) -> bytes:
    buf = io.BytesIO()
    (write_raw_i420 if raw else write_y4m)(seq, buf)
    return buf.getvalue()
