"""Cover-vs-stego distortion metrics on the luma plane."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from stegano_ga.errors import DimensionMismatchError
from stegano_ga.video_io import VideoSequence

PEAK = 255


class FrameQuality(NamedTuple):
    frame: int
    mse: float
    psnr: float


@dataclass
class QualityReport:
    per_frame: list[FrameQuality]
    aggregate_mse: float
    aggregate_psnr: float
    encode_seconds: float = math.nan
    decode_seconds: float = math.nan


@dataclass
class Timings:
    encode_seconds: float = math.nan
    decode_seconds: float = math.nan
    payload_bytes: int | None = None


def _sq_error(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"plane shapes differ: {a.shape} vs {b.shape}")
    d = a.astype(np.int64) - b.astype(np.int64)
    return float(np.dot(d.ravel(), d.ravel()))


def mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared sample difference between two equally sized planes."""
    return _sq_error(a, b) / a.size


def psnr(mse_value: float, peak: int = PEAK) -> float:
    if mse_value < 0:
        raise ValueError("mse must be non-negative")
    if mse_value == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse_value)


def psnr_series(cover: VideoSequence, stego: VideoSequence) -> QualityReport:
    """Per-frame Y metrics plus an aggregate pooled over every Y sample."""
    if not cover.same_shape(stego):
        raise DimensionMismatchError(
            f"cover {cover.width}x{cover.height}x{cover.frame_count} vs "
            f"stego {stego.width}x{stego.height}x{stego.frame_count}"
        )
    per_frame = []
    total = 0.0
    for k, (a, b) in enumerate(zip(cover.frames, stego.frames)):
        sq = _sq_error(a.y, b.y)
        total += sq
        m = sq / a.y.size
        per_frame.append(FrameQuality(k, m, psnr(m)))
    samples = cover.width * cover.height * cover.frame_count
    agg = total / samples if samples else 0.0
    return QualityReport(per_frame, agg, psnr(agg))


def histogram(plane: np.ndarray) -> np.ndarray:
    return np.bincount(np.asarray(plane, dtype=np.uint8).ravel(), minlength=256)


def format_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.2f}"


def format_mse(value: float) -> str:
    return f"{value:.6g}"


def compare_report(cover: VideoSequence, stego: VideoSequence, timings: Timings | None = None) -> str:
    """One-row results table: size, frames, payload, timings, PSNR, MSE."""
    timings = timings or Timings()
    report = psnr_series(cover, stego)
    report.encode_seconds = timings.encode_seconds
    report.decode_seconds = timings.decode_seconds

    def secs(v: float) -> str:
        return "-" if math.isnan(v) else f"{v:.2f}"

    header = ("size", "frames", "payload_bytes", "encode_s", "decode_s", "psnr_db", "mse")
    row = (
        f"{cover.width}x{cover.height}",
        str(cover.frame_count),
        "-" if timings.payload_bytes is None else str(timings.payload_bytes),
        secs(report.encode_seconds),
        secs(report.decode_seconds),
        format_psnr(report.aggregate_psnr),
        format_mse(report.aggregate_mse),
    )
    widths = [max(len(h), len(v)) for h, v in zip(header, row)]
    lines = ["  ".join(s.rjust(w) for s, w in zip(cells, widths)) for cells in (header, row)]
    return "\n".join(lines) + "\n"


def per_frame_csv(report: QualityReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["frame", "mse", "psnr"])
    for fq in report.per_frame:
        w.writerow([fq.frame, format_mse(fq.mse), format_psnr(fq.psnr)])
    return buf.getvalue()


def histogram_csv(cover_plane: np.ndarray, stego_plane: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin", "cover_count", "stego_count"])
    for b, (c, s) in enumerate(zip(histogram(cover_plane), histogram(stego_plane))):
        w.writerow([b, int(c), int(s)])
    return buf.getvalue()
