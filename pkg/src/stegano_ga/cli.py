"""``stegano-ga`` command line.

Exit codes: 0 ok, 1 usage, 2 capacity, 3 integrity / wrong password,
4 I/O or format.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import tempfile
import time

from stegano_ga import codec, quality, roi
from stegano_ga.errors import CapacityError, ExhaustionError, FormatError, IntegrityError
from stegano_ga.ga import GaParams
from stegano_ga.video_io import VideoSequence, dump_video, is_y4m, load_video

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_INTEGRITY, EXIT_IO = 0, 1, 2, 3, 4
PASSWORD_ENV = "STEGO_PASSWORD"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError("fraction must lie in (0, 1]")
    return value


def _add_raw(p: argparse.ArgumentParser) -> None:
    p.add_argument("--raw", action="store_true", help="headerless I420 instead of Y4M")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)


def _add_password(p: argparse.ArgumentParser) -> None:
    p.add_argument("--password", help=f"falls back to ${PASSWORD_ENV}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stegano-ga", description="Hide encrypted files in the luma plane of YUV video.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="encrypt a file and hide it in a cover video")
    p.add_argument("--cover", required=True)
    p.add_argument("--secret", required=True)
    _add_password(p)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--no-ga", action="store_true", help="write bytes directly, no GA search")
    p.add_argument("--pop", type=int, default=16)
    p.add_argument("--max-gen", type=int, default=64)
    p.add_argument("--fraction", type=_fraction, default=0.1)
    p.add_argument("--jobs", type=int, default=1)
    _add_raw(p)

    p = sub.add_parser("extract", help="recover the hidden file")
    p.add_argument("--stego", required=True)
    p.add_argument("--sidecar", required=True)
    _add_password(p)
    p.add_argument("--out", required=True)
    _add_raw(p)

    p = sub.add_parser("restore", help="rebuild the original cover from stego + sidecar")
    p.add_argument("--stego", required=True)
    p.add_argument("--sidecar", required=True)
    p.add_argument("--out", required=True)
    _add_raw(p)

    p = sub.add_parser("capacity", help="report embedding capacity of a cover")
    p.add_argument("--cover", required=True)
    p.add_argument("--fraction", type=_fraction, default=0.1)
    _add_raw(p)

    p = sub.add_parser("metrics", help="PSNR/MSE and histograms of a cover/stego pair")
    p.add_argument("--cover", required=True)
    p.add_argument("--stego", required=True)
    p.add_argument("--per-frame", metavar="CSV")
    p.add_argument("--hist", nargs=2, metavar=("FRAME", "CSV"))
    _add_raw(p)
    return parser


def _raw_dims(args, fallback: tuple[int, int] | None = None) -> tuple[int, int] | None:
    if args.width is not None or args.height is not None:
        if args.width is None or args.height is None:
            raise UsageError("--width and --height must be given together")
        return args.width, args.height
    if args.raw:
        if fallback is None:
            raise UsageError("--raw needs --width and --height")
        return fallback
    return None


def _resolve_password(args) -> str:
    password = args.password if args.password is not None else os.environ.get(PASSWORD_ENV)
    if not password:
        raise UsageError(f"no password: pass --password or set {PASSWORD_ENV}")
    return password


def _load(path: str, dims: tuple[int, int] | None) -> VideoSequence:
    if dims is None and not is_y4m(path):
        raise FormatError(f"{path} is not a Y4M file; use --raw --width W --height H")
    return load_video(path, *(dims or (None, None)))


@contextlib.contextmanager
def _atomic_outputs(*paths: str):
    """Yield temp paths; rename them over ``paths`` only if the block succeeds."""
    temps = []
    try:
        for path in paths:
            fd, tmp = tempfile.mkstemp(prefix=".stegano-", dir=os.path.dirname(os.path.abspath(path)))
            os.close(fd)
            temps.append(tmp)
        yield temps
        for tmp, path in zip(temps, paths):
            os.replace(tmp, path)
        temps = []
    finally:
        for tmp in temps:
            with contextlib.suppress(FileNotFoundError):
                os.unlink(tmp)


def _write_bytes(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def _cmd_embed(args) -> int:
    password = _resolve_password(args)
    dims = _raw_dims(args)
    cover = _load(args.cover, dims)
    with open(args.secret, "rb") as fh:
        secret = fh.read()
    t0 = time.perf_counter()
    if args.no_ga:
        stego, sidecar = codec.embed_direct(cover, secret, password, args.seed, args.fraction)
    else:
        params = GaParams(population_size=args.pop, max_generations=args.max_gen, seed=args.seed)
        stego, sidecar = codec.embed(cover, secret, password, params, args.fraction, jobs=max(1, args.jobs))
    encode_s = time.perf_counter() - t0
    with _atomic_outputs(args.out, args.sidecar) as (out_tmp, side_tmp):
        _write_bytes(out_tmp, dump_video(stego, raw=dims is not None))
        _write_bytes(side_tmp, codec.write_sidecar(sidecar).encode("utf-8"))
    print(f"embedded {len(secret)} bytes ({sidecar.payload_len} ciphertext) into {cover.frame_count} frames")
    print(f"encoding_time_s {encode_s:.3f}")
    return EXIT_OK


def _read_sidecar(path: str) -> codec.Sidecar:
    with open(path, "rb") as fh:
        return codec.parse_sidecar(fh.read())


def _cmd_extract(args) -> int:
    password = _resolve_password(args)
    sidecar = _read_sidecar(args.sidecar)
    stego = _load(args.stego, _raw_dims(args, (sidecar.width, sidecar.height)))
    t0 = time.perf_counter()
    secret = codec.extract(stego, sidecar, password)
    decode_s = time.perf_counter() - t0
    with _atomic_outputs(args.out) as (tmp,):
        _write_bytes(tmp, secret)
    print(f"extracted {len(secret)} bytes")
    print(f"decoding_time_s {decode_s:.3f}")
    return EXIT_OK


def _cmd_restore(args) -> int:
    sidecar = _read_sidecar(args.sidecar)
    dims = _raw_dims(args, (sidecar.width, sidecar.height))
    stego = _load(args.stego, dims)
    cover = codec.restore(stego, sidecar)
    with _atomic_outputs(args.out) as (tmp,):
        _write_bytes(tmp, dump_video(cover, raw=dims is not None))
    print(f"restored {len(sidecar.records)} samples across {cover.frame_count} frames")
    return EXIT_OK


def _cmd_capacity(args) -> int:
    cover = _load(args.cover, _raw_dims(args))
    params = roi.RoiParams(cover.width, cover.height, 0, max(cover.frame_count, 1), args.fraction)
    per_frame = roi.frame_capacity(params)
    print(f"frames {cover.frame_count}")
    print(f"frame_capacity_bytes {per_frame}")
    print(f"total_capacity_bytes {per_frame * cover.frame_count}")
    print(f"max_secret_bytes {max(0, codec.max_secret(cover, args.fraction))}")
    return EXIT_OK


def _cmd_metrics(args) -> int:
    dims = _raw_dims(args)
    cover = _load(args.cover, dims)
    stego = _load(args.stego, dims)
    sys.stdout.write(quality.compare_report(cover, stego))
    if args.per_frame:
        report = quality.psnr_series(cover, stego)
        with _atomic_outputs(args.per_frame) as (tmp,):
            _write_bytes(tmp, quality.per_frame_csv(report).encode())
    if args.hist:
        try:
            k = int(args.hist[0])
        except ValueError:
            raise UsageError("--hist frame index must be an integer") from None
        if not 0 <= k < min(cover.frame_count, stego.frame_count):
            raise UsageError(f"--hist frame {k} out of range")
        with _atomic_outputs(args.hist[1]) as (tmp,):
            _write_bytes(tmp, quality.histogram_csv(cover.frames[k].y, stego.frames[k].y).encode())
    return EXIT_OK


COMMANDS = {
    "embed": _cmd_embed,
    "extract": _cmd_extract,
    "restore": _cmd_restore,
    "capacity": _cmd_capacity,
    "metrics": _cmd_metrics,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (CapacityError, ExhaustionError) as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (FormatError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
