"""Embedding, extraction and cover restoration, plus the CSV sidecar map.

Every embedded ciphertext byte leaves one sidecar record holding two signed
corrections against the stego luma at that pixel:

* ``delta_extract`` recovers the ciphertext byte (stego + de == byte);
* ``delta_restore`` recovers the cover sample (stego + dr == original).
"""

from __future__ import annotations

import io
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, TextIO

import numpy as np

from stegano_ga.cipher import BLOCK, CipherEnvelope, decrypt_payload, derive_key, encrypt_payload
from stegano_ga.errors import (
    BadMagicError,
    CapacityError,
    CorruptionError,
    DeltaRangeError,
    DimensionMismatchError,
    RecordCountError,
    SidecarError,
    VersionMismatchError,
)
from stegano_ga.ga import GaParams, PixelRef, evolve
from stegano_ga.roi import RoiParams, candidate_positions, frame_capacity
from stegano_ga.video_io import VideoSequence

SIDECAR_VERSION = 1
SIDECAR_COLUMNS = "frame,x,y,de,dr"
_HEADER_RE = re.compile(r"#SGV(\d+),w=(\d+),h=(\d+),f=(\d+),len=(\d+),iv=([0-9a-f]{32})")


class SidecarRecord(NamedTuple):
    frame: int
    x: int
    y: int
    delta_extract: int
    delta_restore: int


@dataclass
class Sidecar:
    width: int
    height: int
    frame_count: int
    payload_len: int
    iv: bytes
    records: list[SidecarRecord] = field(default_factory=list)
    version: int = SIDECAR_VERSION

    def check_video(self, seq: VideoSequence) -> None:
        if (seq.width, seq.height, seq.frame_count) != (self.width, self.height, self.frame_count):
            raise DimensionMismatchError(
                f"sidecar describes {self.width}x{self.height}x{self.frame_count}, "
                f"video is {seq.width}x{seq.height}x{seq.frame_count}"
            )


def allocate(ciphertext_len: int, frame_count: int, capacity_per_frame: int) -> list[tuple[int, int]]:
    """Contiguous per-frame byte ranges ``[start, stop)``, ``ceil(L/F)`` bytes each."""
    if frame_count <= 0:
        raise ValueError("frame_count must be positive")
    per_frame = math.ceil(ciphertext_len / frame_count)
    if per_frame > capacity_per_frame:
        raise CapacityError(
            f"payload of {ciphertext_len} bytes needs {per_frame} bytes/frame; "
            f"capacity is {capacity_per_frame} bytes/frame "
            f"(max payload {capacity_per_frame * frame_count} bytes)",
            max_payload=capacity_per_frame * frame_count,
        )
    return [
        (min(k * per_frame, ciphertext_len), min((k + 1) * per_frame, ciphertext_len))
        for k in range(frame_count)
    ]


def max_ciphertext(cover: VideoSequence, row_fraction: float = 0.1) -> int:
    params = RoiParams(cover.width, cover.height, 0, max(cover.frame_count, 1), row_fraction)
    return frame_capacity(params) * cover.frame_count


def max_secret(cover: VideoSequence, row_fraction: float = 0.1) -> int:
    """Largest plaintext whose padded ciphertext still fits."""
    return max(-1, max_ciphertext(cover, row_fraction) // BLOCK * BLOCK - 1)


def frame_rng(seed: int, frame: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, frame)))


def iv_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1,)))


def _embed_frame(
    plane: np.ndarray,
    frame: int,
    chunk: bytes,
    positions: list[tuple[int, int]],
    params: GaParams | None,
) -> tuple[np.ndarray, list[SidecarRecord]]:
    """Embed ``chunk`` into one luma plane. ``params=None`` means direct writes, no search."""
    plane = plane.copy()
    pool = [PixelRef(frame, col, row) for row, col in positions]
    lumas = np.array([plane[row, col] for row, col in positions], dtype=np.int16)
    rng = frame_rng(params.seed, frame) if params is not None else None
    records = []
    for target in chunk:
        if params is None:
            idx, final = 0, target
        else:
            res = evolve(pool, lumas, target, params, rng)
            idx, final = res.index, res.final_value
        ref = pool.pop(idx)
        original = int(lumas[idx])
        lumas = np.delete(lumas, idx)
        plane[ref.y, ref.x] = final
        records.append(SidecarRecord(frame, ref.x, ref.y, target - final, original - final))
    return plane, records


def _embed_frame_args(args):
    return _embed_frame(*args)


def embed_ciphertext(
    cover: VideoSequence,
    data: bytes,
    iv: bytes,
    params: GaParams | None = GaParams(),
    row_fraction: float = 0.1,
    jobs: int = 1,
) -> tuple[VideoSequence, Sidecar]:
    """Hide already-encrypted ``data``; ``params=None`` selects the direct baseline."""
    if cover.frame_count == 0:
        if data:
            raise CapacityError("cover has no frames", max_payload=0)
        return cover.copy(), Sidecar(cover.width, cover.height, 0, 0, iv)
    roi = RoiParams(cover.width, cover.height, len(data), cover.frame_count, row_fraction)
    plan = allocate(len(data), cover.frame_count, frame_capacity(roi))
    jobs_args = []
    for k, (start, stop) in enumerate(plan):
        if stop > start:
            positions = candidate_positions(roi, stop - start, frame=k)
            jobs_args.append((cover.frames[k].y, k, data[start:stop], positions, params))

    if jobs > 1 and len(jobs_args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_embed_frame_args, jobs_args, chunksize=max(1, len(jobs_args) // (4 * jobs))))
    else:
        results = [_embed_frame(*a) for a in jobs_args]

    stego = cover.copy()
    records: list[SidecarRecord] = []
    for args, (plane, recs) in zip(jobs_args, results):
        stego.frames[args[1]].y = plane
        records.extend(recs)
    return stego, Sidecar(cover.width, cover.height, cover.frame_count, len(data), iv, records)


def _encrypt(secret: bytes, password: str, seed: int) -> CipherEnvelope:
    return encrypt_payload(secret, derive_key(password), iv_rng(seed))


def embed(
    cover: VideoSequence,
    secret: bytes,
    password: str,
    params: GaParams = GaParams(),
    row_fraction: float = 0.1,
    jobs: int = 1,
) -> tuple[VideoSequence, Sidecar]:
    env = _encrypt(secret, password, params.seed)
    return embed_ciphertext(cover, env.ciphertext, env.iv, params, row_fraction, jobs)


def embed_direct(
    cover: VideoSequence,
    secret: bytes,
    password: str,
    seed: int = 0,
    row_fraction: float = 0.1,
) -> tuple[VideoSequence, Sidecar]:
    """Baseline without search: each byte overwrites the next unused candidate."""
    env = _encrypt(secret, password, seed)
    return embed_ciphertext(cover, env.ciphertext, env.iv, None, row_fraction)


def _record_arrays(sidecar: Sidecar) -> np.ndarray:
    if not sidecar.records:
        return np.empty((0, 5), dtype=np.int64)
    return np.array(sidecar.records, dtype=np.int64)


def _apply(stego: VideoSequence, sidecar: Sidecar, column: int, what: str) -> tuple[np.ndarray, np.ndarray]:
    """Stego luma plus the chosen delta column, per record, with range checks."""
    sidecar.check_video(stego)
    recs = _record_arrays(sidecar)
    values = np.empty(len(recs), dtype=np.int64)
    for k in np.unique(recs[:, 0]):
        sel = recs[:, 0] == k
        values[sel] = stego.frames[int(k)].y[recs[sel, 2], recs[sel, 1]]
    values += recs[:, column]
    bad = np.flatnonzero((values < 0) | (values > 255))
    if len(bad):
        r = sidecar.records[int(bad[0])]
        raise CorruptionError(f"{what} at frame {r.frame} ({r.x},{r.y}) falls outside [0,255]")
    return recs, values


def extract_ciphertext(stego: VideoSequence, sidecar: Sidecar) -> bytes:
    _, values = _apply(stego, sidecar, 3, "reconstructed ciphertext byte")
    return values.astype(np.uint8).tobytes()


def extract(stego: VideoSequence, sidecar: Sidecar, password: str) -> bytes:
    key = derive_key(password)
    data = extract_ciphertext(stego, sidecar)
    try:
        env = CipherEnvelope(sidecar.iv, data)
    except ValueError as exc:
        raise CorruptionError(f"extracted ciphertext is malformed: {exc}") from exc
    return decrypt_payload(env, key)


def restore(stego: VideoSequence, sidecar: Sidecar) -> VideoSequence:
    recs, values = _apply(stego, sidecar, 4, "restored luma")
    cover = stego.copy()
    for k in np.unique(recs[:, 0]):
        sel = recs[:, 0] == k
        cover.frames[int(k)].y[recs[sel, 2], recs[sel, 1]] = values[sel]
    return cover


def write_sidecar(sidecar: Sidecar, sink: TextIO | None = None) -> str | int:
    lines = [
        f"#SGV{sidecar.version},w={sidecar.width},h={sidecar.height},f={sidecar.frame_count},"
        f"len={sidecar.payload_len},iv={sidecar.iv.hex()}",
        SIDECAR_COLUMNS,
    ]
    lines.extend(f"{r.frame},{r.x},{r.y},{r.delta_extract},{r.delta_restore}" for r in sidecar.records)
    text = "\n".join(lines) + "\n"
    if sink is None:
        return text
    return sink.write(text)


def parse_sidecar(source: str | bytes | TextIO) -> Sidecar:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)
    lines = source.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not lines[0].startswith("#SGV"):
        raise BadMagicError("sidecar does not start with #SGV")
    m = _HEADER_RE.fullmatch(lines[0])
    version = re.match(r"#SGV(\d+)", lines[0])
    if version is None:
        raise BadMagicError("sidecar magic lacks a version number")
    if int(version.group(1)) != SIDECAR_VERSION:
        raise VersionMismatchError(f"sidecar version {version.group(1)} is not supported (expected {SIDECAR_VERSION})")
    if m is None:
        raise SidecarError(f"malformed sidecar header: {lines[0]!r}")
    width, height, frames, length = (int(g) for g in m.groups()[1:5])
    iv = bytes.fromhex(m.group(6))
    if len(lines) < 2 or lines[1] != SIDECAR_COLUMNS:
        raise SidecarError(f"expected column line {SIDECAR_COLUMNS!r}")
    body = lines[2:]
    if len(body) != length:
        raise RecordCountError(f"sidecar declares {length} records but holds {len(body)}")

    records = []
    seen: set[tuple[int, int, int]] = set()
    for lineno, line in enumerate(body, start=3):
        parts = line.split(",")
        try:
            if len(parts) != 5:
                raise ValueError
            frame, x, y, de, dr = (int(p) for p in parts)
        except ValueError:
            raise SidecarError(f"line {lineno}: malformed record {line!r}") from None
        if not (0 <= frame < frames and 0 <= x < width and 0 <= y < height):
            raise SidecarError(f"line {lineno}: position ({frame},{x},{y}) lies outside the video")
        if not (-255 <= de <= 255 and -255 <= dr <= 255):
            raise DeltaRangeError(f"line {lineno}: delta outside [-255,255]")
        if (frame, x, y) in seen:
            raise SidecarError(f"line {lineno}: pixel ({frame},{x},{y}) recorded twice")
        seen.add((frame, x, y))
        records.append(SidecarRecord(frame, x, y, de, dr))
    return Sidecar(width, height, frames, length, iv, records)
