"""Desk-scale results table: payload sizes x frame counts on synthetic CIF covers.

    python scripts/run_results_table.py --frames 300 90 --payloads 15872 76186 141312

Prints one results row per (cover, payload) and optionally writes them all to CSV.
"""

import argparse
import csv
import time

import numpy as np

from stegano_ga import codec
from stegano_ga.ga import GaParams
from stegano_ga.quality import format_mse, format_psnr, psnr_series
from stegano_ga.synthetic import natural_cover, random_cover

PAYLOADS = [15_872, 76_186, 141_312]  # 15.5 KB, 74.4 KB, 138 KB


def run_one(cover, n, seed, jobs):
    secret = np.random.default_rng(seed).bytes(n)
    t0 = time.perf_counter()
    stego, sc = codec.embed(cover, secret, "table", GaParams(seed=seed), jobs=jobs)
    enc = time.perf_counter() - t0
    t0 = time.perf_counter()
    assert codec.extract(stego, sc, "table") == secret
    dec = time.perf_counter() - t0
    rep = psnr_series(cover, stego)
    return enc, dec, rep.aggregate_psnr, rep.aggregate_mse


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--frames", type=int, nargs="+", default=[300])
    ap.add_argument("--payloads", type=int, nargs="+", default=PAYLOADS)
    ap.add_argument("--kind", choices=["natural", "random"], default="natural")
    ap.add_argument("--width", type=int, default=352)
    ap.add_argument("--height", type=int, default=288)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--csv")
    args = ap.parse_args()

    maker = natural_cover if args.kind == "natural" else random_cover
    rows = []
    print(f"{'size':>9} {'frames':>6} {'payload':>8} {'enc_s':>7} {'dec_s':>6} {'psnr':>7} {'mse':>10}")
    for frames in args.frames:
        cover = maker(args.width, args.height, frames, seed=args.seed)
        for n in args.payloads:
            enc, dec, p, m = run_one(cover, n, args.seed, args.jobs)
            row = [f"{args.width}x{args.height}", frames, n, f"{enc:.2f}", f"{dec:.2f}", format_psnr(p), format_mse(m)]
            rows.append(row)
            print(f"{row[0]:>9} {row[1]:>6} {row[2]:>8} {row[3]:>7} {row[4]:>6} {row[5]:>7} {row[6]:>10}", flush=True)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["size", "frames", "payload_bytes", "encode_s", "decode_s", "psnr_db", "mse"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
