"""Synthetic covers for experiments and tests (no standard CIF assets ship here)."""

from __future__ import annotations

import numpy as np

from stegano_ga.video_io import Frame, VideoSequence


def pink_field(height: int, width: int, rng: np.random.Generator, exponent: float = 1.0) -> np.ndarray:
    """Zero-mean 2-D noise with a 1/f^exponent amplitude spectrum, unit variance."""
    white = rng.standard_normal((height, width))
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.rfftfreq(width)[None, :]
    f = np.hypot(fy, fx)
    f[0, 0] = 1.0
    spectrum = np.fft.rfft2(white) / f**exponent
    spectrum[0, 0] = 0.0
    field = np.fft.irfft2(spectrum, s=(height, width))
    return field / field.std()


def _stretch(field: np.ndarray, lo_pct: float = 0.5, hi_pct: float = 99.5) -> np.ndarray:
    lo, hi = np.percentile(field, [lo_pct, hi_pct])
    return (field - lo) * (255.0 / (hi - lo))


def natural_cover(
    width: int,
    height: int,
    frames: int,
    seed: int = 0,
    pan: tuple[int, int] = (1, 1),
    grain: float = 2.0,
) -> VideoSequence:
    """A panning 1/f texture with per-frame sensor grain.

    The scene is one large pink-noise canvas contrast-stretched to the full
    8-bit range; each frame is a window shifted by ``pan`` pixels, plus
    independent Gaussian grain, so content is spatially smooth and
    temporally coherent like camera footage.
    """
    rng = np.random.default_rng(seed)
    dy, dx = pan
    ch, cw = height + abs(dy) * frames, width + abs(dx) * frames
    canvas = _stretch(pink_field(ch, cw, rng))
    chroma_u = np.clip(128 + 20 * pink_field(ch // 2 + 1, cw // 2 + 1, rng), 0, 255)
    chroma_v = np.clip(128 + 20 * pink_field(ch // 2 + 1, cw // 2 + 1, rng), 0, 255)
    seq = VideoSequence(width, height)
    for k in range(frames):
        oy, ox = (k * dy) % (ch - height + 1), (k * dx) % (cw - width + 1)
        y = canvas[oy : oy + height, ox : ox + width] + grain * rng.standard_normal((height, width))
        cy, cx = oy // 2, ox // 2
        u = chroma_u[cy : cy + height // 2, cx : cx + width // 2]
        v = chroma_v[cy : cy + height // 2, cx : cx + width // 2]
        seq.append(
            Frame(
                np.clip(np.rint(y), 0, 255).astype(np.uint8),
                np.rint(u).astype(np.uint8),
                np.rint(v).astype(np.uint8),
            )
        )
    return seq


def random_cover(width: int, height: int, frames: int, seed: int = 0) -> VideoSequence:
    """Independent uniform samples in every plane."""
    rng = np.random.default_rng(seed)
    seq = VideoSequence(width, height)
    for _ in range(frames):
        seq.append(
            Frame(
                rng.integers(0, 256, (height, width), dtype=np.uint8),
                rng.integers(0, 256, (height // 2, width // 2), dtype=np.uint8),
                rng.integers(0, 256, (height // 2, width // 2), dtype=np.uint8),
            )
        )
    return seq
