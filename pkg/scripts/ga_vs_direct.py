"""PSNR with the GA search versus direct overwriting, over several seeds."""

import argparse

import numpy as np

from stegano_ga import codec
from stegano_ga.ga import GaParams
from stegano_ga.quality import psnr_series
from stegano_ga.synthetic import natural_cover, random_cover


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=["natural", "random"], default="random")
    ap.add_argument("--width", type=int, default=352)
    ap.add_argument("--height", type=int, default=288)
    ap.add_argument("--frames", type=int, default=30)
    ap.add_argument("--bytes-per-frame", type=int, default=53)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    maker = natural_cover if args.kind == "natural" else random_cover
    n = args.frames * args.bytes_per_frame // 16 * 16 - 1
    gains = []
    print(f"{'seed':>4} {'ga_db':>7} {'direct_db':>9} {'gain':>6}")
    for seed in range(args.seeds):
        cover = maker(args.width, args.height, args.frames, seed=seed)
        secret = np.random.default_rng(seed + 100).bytes(n)
        ga = psnr_series(cover, codec.embed(cover, secret, "pw", GaParams(seed=seed))[0]).aggregate_psnr
        direct = psnr_series(cover, codec.embed_direct(cover, secret, "pw", seed=seed)[0]).aggregate_psnr
        gains.append(ga - direct)
        print(f"{seed:>4} {ga:>7.2f} {direct:>9.2f} {ga - direct:>6.2f}")
    print(f"gain min {min(gains):.2f} mean {np.mean(gains):.2f} dB")


if __name__ == "__main__":
    main()
