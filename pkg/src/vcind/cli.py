"""Command-line entry point.

Usage:
    vcind generate --family threshold --N 16 --out t16.vctm
    vcind analyze t16.vctm --window 0 --window 1
    vcind certify t16.vctm --rank 1 --window 0
    vcind fit --family alt_family --n 2 --expect 2 --csv alt2.csv
    vcind witness --n 1 --N 6
    vcind coincide --family spikes --n 2

Exit codes: 0 success, 1 failed expectation or certification, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, vctm
from .density import coincidence_report, fit
from .rank import family_rank, joint_cuts
from .scheme import SchemeParams, certify
from .trace import OPS, alternation_number
from .witness import WitnessPattern, build_witness_family
from .zoo import KINDS, FamilySpec, generate, parse_family, subsample

log = logging.getLogger("vcind")


class UsageError(Exception):
    pass


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "verbose")}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _family(args) -> FamilySpec:
    try:
        if args.family == "product":
            if not (args.left and args.right and args.op):
                raise UsageError("--family product needs --left, --right and --op")
            return FamilySpec(
                "product", left=parse_family(args.left), right=parse_family(args.right), op=args.op, seed=args.seed
            )
        spec = parse_family(args.family, n=args.n)
        if args.seed is not None:
            spec = FamilySpec(spec.kind, spec.n, spec.window, spec.left, spec.right, spec.op, args.seed)
        return spec
    except ValueError as e:
        raise UsageError(str(e)) from None


def _read_matrix(args):
    try:
        return vctm.read(args.file, dedup=args.dedup)
    except (OSError, ValueError) as e:
        raise UsageError(f"{args.file}: {e}") from None


def cmd_generate(args) -> int:
    spec = _family(args)
    try:
        m = generate(spec, args.N)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.sample is not None:
        seed = 0 if args.seed is None else args.seed
        log.info("seed %d", seed)
        m = subsample(m, args.sample, seed)
    _emit(vctm.dumps(m), args.out)
    return 0


def cmd_witness(args) -> int:
    try:
        if args.blocks:
            p = WitnessPattern.from_blocks(args.blocks)
            if p.n != args.n:
                raise UsageError(f"--blocks gives n={p.n}, expected {args.n} (n + 2 block values)")
        else:
            p = WitnessPattern.canonical(args.n)
        m = build_witness_family(p, args.N)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(vctm.dumps(m), args.out)
    return 0


def cmd_analyze(args) -> int:
    m = _read_matrix(args)
    windows = args.window or [0]
    report = {
        "config": _config(args),
        "width": m.width,
        "distinct_count": len(m),
        "max_alternation": max(alternation_number(r) for r in m),
        "family_rank": {str(w): family_rank(m, w) for w in windows},
        "joint_cuts": list(joint_cuts(m).cuts),
    }
    _emit(_json(report), args.out)
    return 0


def cmd_certify(args) -> int:
    m = _read_matrix(args)
    result = certify(m, SchemeParams(args.rank, args.window))
    body = {"config": _config(args), "status": "certified" if result.ok else "failure"}
    body.update(result.to_json())
    _emit(_json(body), args.out)
    return 0 if result.ok else 1


def cmd_fit(args) -> int:
    spec = _family(args)
    try:
        est = fit(spec, args.grid, counts=args.counts)
    except (ValueError, RuntimeError) as e:
        raise UsageError(str(e)) from None
    body = {"config": _config(args)}
    body.update(est.to_json())
    if args.csv:
        Path(args.csv).write_text(est.to_csv())
    _emit(est.to_csv() if args.format == "csv" else _json(body), args.out)
    if args.expect is not None:
        return 0 if est.verdict_rank == args.expect else 1
    return 0


def cmd_coincide(args) -> int:
    spec = _family(args)
    try:
        report = coincidence_report(spec, args.grid, args.window)
    except (ValueError, RuntimeError) as e:
        raise UsageError(str(e)) from None
    body = {"config": _config(args)}
    body.update(report)
    _emit(_json(body), args.out)
    return 0 if report["agree"] else 1


def _grid(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be comma-separated integers: {text!r}") from None


def _family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True,
                   help=f"one of {', '.join(KINDS)}; also 'kind:n' or 'product(a,b,op)'")
    p.add_argument("--n", type=int, help="rank parameter of the family")
    p.add_argument("--left", help="first operand family for --family product")
    p.add_argument("--right", help="second operand family for --family product")
    p.add_argument("--op", choices=sorted(OPS), help="pointwise op for --family product")
    p.add_argument("--seed", type=int, help="seed for optional subsampling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vcind", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a zoo family as vctm")
    _family_flags(p)
    p.add_argument("--N", type=int, required=True, help="width")
    p.add_argument("--sample", type=int, help="keep a seeded sample of this many rows")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("witness", help="write a lower-bound witness family as vctm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--blocks", help="n+2 block values, e.g. 010; default all zero")
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("analyze", help="counts, alternation, rank and joint cuts of a vctm file")
    p.add_argument("file")
    p.add_argument("--window", type=int, action="append", help="window for family rank (repeatable)")
    p.add_argument("--dedup", action="store_true", help="drop duplicate rows instead of failing")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("certify", help="encode every row with a defining scheme")
    p.add_argument("file")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--window", type=int, default=0)
    p.add_argument("--dedup", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("fit", help="fit the growth exponent of a family")
    _family_flags(p)
    p.add_argument("--grid", type=_grid, help="comma-separated widths")
    p.add_argument("--counts", choices=("auto", "closed", "enumerate"), default="auto")
    p.add_argument("--expect", type=int, help="exit 1 unless the verdict is integer(EXPECT)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--csv", help="also write N,count,logN,logcount to this path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("coincide", help="compare fitted exponent, family rank and scheme rank")
    _family_flags(p)
    p.add_argument("--window", type=int, default=0)
    p.add_argument("--grid", type=_grid)
    p.add_argument("--out")
    p.set_defaults(func=cmd_coincide)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"vcind {args.command}: error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
