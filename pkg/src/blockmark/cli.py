"""Command-line interface: keygen, embed, extract, attack, evaluate.

Exit status is 0 on success and 2 on any usage, validation, or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import secrets
import sys
import tempfile
from pathlib import Path

from . import attacks
from .embed import embed, saturated_blocks
from .extract import extract
from .keys import KeyFile, KeyFileError, keyfile_parse, prng_next
from .metrics import UndefinedCorrelation, ber, ncc, psnr
from .pnm import load_pbm, load_pgm, write_pbm, write_pgm

GAUSSIAN_SIGMAS = (0, 1, 2, 4, 8)
SALT_PEPPER_PS = (0, 0.01, 0.05)
FILTER_SIZES = (1, 3, 5)
DCT_QUALITIES = (90, 70, 50, 30, 10)
CSV_HEADER = ("attack", "param", "seed", "psnr_attacked", "ber", "ncc")


class CliError(Exception):
    pass


def fmt_db(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.6f}"


def fmt_ncc(recovered, original) -> str:
    try:
        return f"{ncc(recovered, original):.6f}"
    except UndefinedCorrelation:
        return "undef"


def write_atomic(path, data: bytes) -> None:
    """Write via a temporary sibling and rename, so a failure leaves no partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None


def _ratio(text: str) -> tuple[int, int]:
    try:
        num, den = text.split("/")
        return int(num), int(den)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NUM/DEN, got {text!r}") from None


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _load_key(path) -> KeyFile:
    return keyfile_parse(Path(path).read_text(encoding="utf-8"))


def derive_seeds(master: int) -> tuple[int, int, int]:
    """Expand one master seed into (perm, scramble, delta) seeds."""
    perm, state = prng_next(master)
    scramble, state = prng_next(state)
    delta, _ = prng_next(state)
    return perm, scramble, delta


def cmd_keygen(args) -> None:
    master = args.seed if args.seed is not None else secrets.randbits(64)
    perm, scramble, delta = derive_seeds(master)
    alpha_num, alpha_den = args.alpha
    key = KeyFile(
        *args.host_size, *args.mark_size,
        block_size=args.block, alpha_num=alpha_num, alpha_den=alpha_den, c_min=args.cmin,
        perm_seed=perm, scramble_seed=scramble, delta_seed=delta,
    )
    write_atomic(args.out, key.serialize().encode("utf-8"))
    print(args.out)


def cmd_embed(args) -> None:
    host = load_pgm(args.host)
    mark = load_pbm(args.mark)
    key = _load_key(args.key)
    marked = embed(host, mark, key)
    write_atomic(args.out, write_pgm(marked))
    print(f"psnr={fmt_db(psnr(host, marked))}")


def cmd_extract(args) -> None:
    host = load_pgm(args.host)
    marked = load_pgm(args.watermarked)
    key = _load_key(args.key)
    reference = load_pbm(args.reference) if args.reference else None
    recovered = extract(host, marked, key)
    write_atomic(args.out, write_pbm(recovered))
    if reference is not None:
        print(f"ber={ber(recovered, reference):.6f} ncc={fmt_ncc(recovered, reference)}")


_ATTACK_PARAMS = {
    "gaussian": ("sigma",),
    "saltpepper": ("p",),
    "mean": ("k",),
    "median": ("k",),
    "brightness": ("offset",),
    "dctq": ("quality",),
}


def run_attack(kind: str, img, param, seed: int = 0):
    if kind == "gaussian":
        return attacks.gaussian_noise(img, param, seed)
    if kind == "saltpepper":
        return attacks.salt_pepper(img, param, seed)
    if kind == "mean":
        return attacks.mean_filter(img, param)
    if kind == "median":
        return attacks.median_filter(img, param)
    if kind == "brightness":
        return attacks.brightness_shift(img, param)
    if kind == "dctq":
        return attacks.dct_quantize(img, param)
    raise ValueError(f"unknown attack {kind!r}")


def cmd_attack(args) -> None:
    (name,) = _ATTACK_PARAMS[args.type]
    param = getattr(args, name)
    if param is None:
        raise CliError(f"--type {args.type} requires --{name}")
    img = load_pgm(args.inp)
    write_atomic(args.out, write_pgm(run_attack(args.type, img, param, args.seed)))


def attack_grid(seeds: int):
    """Yield ``(attack, param, seed)`` for the evaluation grid."""
    for sigma in GAUSSIAN_SIGMAS:
        for s in range(seeds):
            yield "gaussian", sigma, s
    for p in SALT_PEPPER_PS:
        for s in range(seeds):
            yield "saltpepper", p, s
    for k in FILTER_SIZES:
        yield "mean", k, 0
    for k in FILTER_SIZES:
        yield "median", k, 0
    for q in DCT_QUALITIES:
        yield "dctq", q, 0


def evaluate(host, mark, key, seeds: int = 5) -> tuple[list[tuple], float, int]:
    """Embed once, run the attack grid, and return ``(rows, psnr, saturated_blocks)``."""
    marked = embed(host, mark, key)
    rows = []
    for kind, param, seed in attack_grid(seeds):
        attacked = run_attack(kind, marked, param, seed)
        recovered = extract(host, attacked, key)
        rows.append((
            kind, f"{param:g}", str(seed), fmt_db(psnr(marked, attacked)),
            f"{ber(recovered, mark):.6f}", fmt_ncc(recovered, mark),
        ))
    return rows, psnr(host, marked), saturated_blocks(host, mark, key)


def cmd_evaluate(args) -> None:
    if args.seeds < 1:
        raise CliError("--seeds must be at least 1")
    host = load_pgm(args.host)
    mark = load_pbm(args.mark)
    key = _load_key(args.key)
    rows, embed_psnr, saturated = evaluate(host, mark, key, args.seeds)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    write_atomic(args.out, buf.getvalue().encode("utf-8"))
    print(f"psnr={fmt_db(embed_psnr)} saturated_blocks={saturated}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockmark", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="write a new key file")
    p.add_argument("--host-size", type=_size, required=True)
    p.add_argument("--mark-size", type=_size, required=True)
    p.add_argument("--block", type=int, default=4)
    p.add_argument("--alpha", type=_ratio, default=(1, 10))
    p.add_argument("--cmin", type=int, default=2)
    p.add_argument("--seed", type=_u64)
    p.add_argument("--out", default="key.wmk")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("embed", help="embed a PBM mark into a PGM host")
    p.add_argument("--host", required=True)
    p.add_argument("--mark", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover the mark using the original host")
    p.add_argument("--host", required=True)
    p.add_argument("--watermarked", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--reference")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply one simulated attack")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--type", required=True, choices=sorted(_ATTACK_PARAMS))
    p.add_argument("--sigma", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--offset", type=int)
    p.add_argument("--quality", type=int)
    p.add_argument("--seed", type=_u64, default=0)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("evaluate", help="robustness report over the attack grid")
    p.add_argument("--host", required=True)
    p.add_argument("--mark", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seeds", type=int, default=5)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (CliError, KeyFileError, ValueError, OSError) as exc:
        print(f"blockmark {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
