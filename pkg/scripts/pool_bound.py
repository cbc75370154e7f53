"""Best-case distortion of the candidate pool, independent of the search.

For each frame, greedily matches every target byte to the unused candidate
whose luma is nearest (an optimistic bound on any per-byte search that must
pick from the same candidates), and reports the pooled PSNR that results.
"""

import argparse
import math

import numpy as np

from stegano_ga import codec, roi
from stegano_ga.quality import psnr
from stegano_ga.synthetic import natural_cover, random_cover


def greedy_sq_error(lumas, targets):
    pool = sorted(int(v) for v in lumas)
    total = 0
    for t in targets:
        i = min(range(len(pool)), key=lambda j: abs(pool[j] - t))
        total += (pool.pop(i) - t) ** 2
    return total


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=["natural", "random"], default="natural")
    ap.add_argument("--frames", type=int, default=300)
    ap.add_argument("--payload", type=int, default=15_872)
    ap.add_argument("--sample-frames", type=int, default=20)
    args = ap.parse_args()

    w, h = 352, 288
    maker = natural_cover if args.kind == "natural" else random_cover
    cover = maker(w, h, args.frames, seed=2016)
    ct = (args.payload // 16 + 1) * 16
    params = roi.RoiParams(w, h, ct, args.frames)
    plan = codec.allocate(ct, args.frames, roi.frame_capacity(params))
    rng = np.random.default_rng(0)
    sq = 0
    frames = range(0, args.frames, max(1, args.frames // args.sample_frames))
    for k in frames:
        start, stop = plan[k]
        pos = roi.candidate_positions(params, stop - start)
        lumas = [cover.frames[k].y[r, c] for r, c in pos]
        sq += greedy_sq_error(lumas, rng.integers(0, 256, stop - start))
    per_frame_bytes = math.ceil(ct / args.frames)
    mse = sq / (len(frames) * w * h)
    print(f"{per_frame_bytes} bytes/frame from {len(pos)} candidates: greedy-nearest bound {psnr(mse):.2f} dB")


if __name__ == "__main__":
    main()
