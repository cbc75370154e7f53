"""Write a synthetic cover video to disk (Y4M by default, raw I420 with --raw)."""

import argparse

from stegano_ga.synthetic import natural_cover, random_cover
from stegano_ga.video_io import dump_video


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--kind", choices=["natural", "random"], default="natural")
    ap.add_argument("--width", type=int, default=352)
    ap.add_argument("--height", type=int, default=288)
    ap.add_argument("--frames", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--raw", action="store_true")
    args = ap.parse_args()

    maker = natural_cover if args.kind == "natural" else random_cover
    seq = maker(args.width, args.height, args.frames, seed=args.seed)
    with open(args.out, "wb") as fh:
        fh.write(dump_video(seq, raw=args.raw))
    print(f"wrote {args.kind} cover {args.width}x{args.height}x{args.frames} to {args.out}")


if __name__ == "__main__":
    main()
