import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from stegano_ga.codec import embed
from stegano_ga.errors import DimensionMismatchError
from stegano_ga.quality import (
    Timings,
    compare_report,
    histogram,
    histogram_csv,
    mse,
    per_frame_csv,
    psnr,
    psnr_series,
)
from stegano_ga.video_io import Frame, VideoSequence


def test_mse_identical_and_single_sample():
    a = np.full((288, 352), 90, dtype=np.uint8)
    assert mse(a, a) == 0
    b = a.copy()
    b[100, 200] += 1
    assert mse(a, b) == pytest.approx(9.8643e-6, rel=1e-4)
    assert mse(a, b) == 1 / 101376


def test_mse_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        mse(np.zeros((2, 2), np.uint8), np.zeros((2, 4), np.uint8))


def test_psnr_values():
    assert psnr(0.002) == pytest.approx(75.12, abs=0.005)
    assert psnr(65025) == 0
    assert psnr(0) == math.inf
    with pytest.raises(ValueError):
        psnr(-1)
    assert mse(np.zeros((3, 3), np.uint8), np.full((3, 3), 255, np.uint8)) == 65025


def test_anchor_at_tiny_mse():
    # reference pair: MSE 0.002 reported beside 75.4 dB; the squared L=255 form gives 75.12
    assert abs(psnr(0.002) - 75.4) < 0.3


def _video(frames):
    return VideoSequence(8, 6, [Frame(y, np.zeros((3, 4), np.uint8), np.zeros((3, 4), np.uint8)) for y in frames])


def test_series_known_edits():
    base = [np.full((6, 8), 100, np.uint8) for _ in range(10)]
    edited = [p.copy() for p in base]
    # frame k gets k samples moved by k levels (frame 0 untouched)
    for k in range(10):
        for j in range(k):
            edited[k][j // 8 % 6, j % 8] += k
    rep = psnr_series(_video(base), _video(edited))
    assert rep.per_frame[0].psnr == math.inf and rep.per_frame[0].mse == 0
    for k in range(1, 10):
        expected = k * k * k / 48
        assert rep.per_frame[k].mse == pytest.approx(expected)
        assert rep.per_frame[k].psnr == pytest.approx(10 * math.log10(65025 / expected))
    pooled = sum(k**3 for k in range(10)) / (48 * 10)
    assert rep.aggregate_mse == pytest.approx(pooled)


def test_series_identical_and_single_frame():
    frames = [np.random.default_rng(i).integers(0, 256, (6, 8), dtype=np.uint8) for i in range(4)]
    rep = psnr_series(_video(frames), _video([f.copy() for f in frames]))
    assert all(fq.psnr == math.inf for fq in rep.per_frame) and rep.aggregate_psnr == math.inf
    changed = [f.copy() for f in frames]
    changed[2][0, 0] ^= 4
    rep = psnr_series(_video(frames), _video(changed))
    assert [math.isinf(fq.psnr) for fq in rep.per_frame] == [True, True, False, True]


def test_series_mismatch():
    with pytest.raises(DimensionMismatchError):
        psnr_series(_video([np.zeros((6, 8), np.uint8)]), _video([]))


def test_histogram_uniform():
    h = histogram(np.full((4, 4), 7, np.uint8))
    assert h[7] == 16 and h.sum() == 16 and len(h) == 256


@given(arrays(np.uint8, st.tuples(st.integers(1, 20), st.integers(1, 20))))
def test_histogram_mass(plane):
    assert histogram(plane).sum() == plane.size


@given(arrays(np.uint8, (6, 8)), arrays(np.uint8, (6, 8)))
def test_mse_symmetric_and_psnr_of_self(a, b):
    assert mse(a, b) == mse(b, a)
    assert psnr(mse(a, a)) == math.inf


@given(arrays(np.uint8, (6, 8)), st.lists(st.tuples(st.integers(0, 5), st.integers(0, 7), st.integers(1, 255)), max_size=20))
def test_mse_monotone_in_edits(a, edits):
    b = a.copy()
    prev = 0.0
    seen = set()
    for r, c, delta in edits:
        if (r, c) in seen:
            continue
        seen.add((r, c))
        b[r, c] = (int(b[r, c]) + delta) % 256
        cur = mse(a, b)
        assert cur >= prev
        prev = cur


def test_embedding_histogram_bound(noise_cover):
    stego, sc = embed(noise_cover, bytes(range(250)), "pw")
    per_frame = {}
    for r in sc.records:
        per_frame[r.frame] = per_frame.get(r.frame, 0) + 1
    for k, (a, b) in enumerate(zip(noise_cover.frames, stego.frames)):
        ha, hb = histogram(a.y), histogram(b.y)
        assert ha.sum() == hb.sum()
        assert np.abs(ha - hb).max() <= 2 * per_frame.get(k, 0)


def test_report_columns_consistent(noise_cover):
    stego, sc = embed(noise_cover, b"report" * 30, "pw")
    text = compare_report(noise_cover, stego, Timings(1.5, 0.25, 180))
    header, row = [line.split() for line in text.strip().splitlines()]
    cells = dict(zip(header, row))
    assert cells["size"] == "96x64" and cells["frames"] == "6" and cells["payload_bytes"] == "180"
    assert cells["encode_s"] == "1.50" and cells["decode_s"] == "0.25"
    assert abs(psnr(float(cells["mse"])) - float(cells["psnr_db"])) <= 0.05


def test_report_identical_shows_inf(noise_cover):
    text = compare_report(noise_cover, noise_cover)
    assert " inf " in text and text.strip().endswith("0")


def test_csv_outputs():
    a = _video([np.full((6, 8), 5, np.uint8)])
    b = _video([np.full((6, 8), 6, np.uint8)])
    assert per_frame_csv(psnr_series(a, b)) == "frame,mse,psnr\n0,1,48.13\n"
    lines = histogram_csv(a.frames[0].y, b.frames[0].y).splitlines()
    assert lines[0] == "bin,cover_count,stego_count" and len(lines) == 257
    assert lines[6] == "5,48,0" and lines[7] == "6,0,48"
