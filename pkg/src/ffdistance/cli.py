"""Command-line front end: ``ffdistance {gen,analyze,sweep,verify,sums}``.

Exit codes: 0 success, 1 invariant failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import math
import sys

import numpy as np

from . import char_sums as cs
from .field import FieldCtx, FieldError
from .fourier import write_spectrum_csv
from .mattila import InvariantViolation, bound_report
from .point_sets import FAMILIES, generate, load_set, save_set
from .report import write_csv, write_json
from .sweep import FamilySpec, SweepConfig, check_grid, load_config, resolve_cardinality, run_sweep
from .verify import run_suite

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2

SUMS_FIELDS = ("kind", "param1", "param2", "re", "im", "abs", "bound", "ok")


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def cmd_gen(args) -> int:
    ctx = FieldCtx(args.q)
    check_grid(args.q, args.d)
    n = resolve_cardinality(args.n, args.q, args.d) if args.n is not None else None
    pset = generate(args.family, ctx, args.d, r=args.r, n=n, seed=args.seed)
    save_set(pset, args.out)
    flags = f" flags={','.join(pset.flags)}" if pset.flags else ""
    print(f"wrote {pset.card} points of F_{args.q}^{args.d} to {args.out}{flags}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    pset = load_set(args.set_file)
    check_grid(pset.q, pset.d)
    if args.family:
        pset.provenance.update(family=args.family)
    if args.seed is not None:
        pset.provenance.update(seed=args.seed)
    report = bound_report(pset)
    row = report.row()
    with _output(args.out) as fh:
        if args.format == "json":
            write_json(row, fh)
        else:
            write_csv([row], fh)
    if args.spectrum:
        with open(args.spectrum, "w", newline="") as fh:
            write_spectrum_csv(pset.spectrum(), fh)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.config:
        cfg = load_config(args.config)
    else:
        if not (args.q and args.d and args.families):
            raise ValueError("sweep needs --config or all of --q, --d, --families")
        cfg = SweepConfig(
            primes=_int_list(args.q), dims=_int_list(args.d),
            families=[FamilySpec.parse(f) for f in args.families.split(",")],
            seeds=_int_list(args.seed) if args.seed else [0],
        )
    if args.out:
        cfg.out = args.out
    if args.format:
        cfg.format = args.format
    if args.jobs:
        cfg.jobs = args.jobs
    rows = [r.row() for r in run_sweep(cfg)]
    with _output(cfg.out) as fh:
        if cfg.format == "json":
            write_json(rows, fh)
        else:
            write_csv(rows, fh)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.max_q, _int_list(args.dims))
    for res in results:
        print(res.line())
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_INVARIANT if failed else EXIT_OK


def _sums_rows(kind: str, ctx: FieldCtx, d: int, r: int):
    q = ctx.q
    if kind == "gauss":
        for k in range(q):
            v = cs.gauss_g(k, ctx).value
            bound = float(q) if k == 0 else math.sqrt(q)
            yield k, "", v, bound, math.isclose(abs(v), bound, rel_tol=1e-9)
    elif kind == "kloosterman":
        wb = cs.weil_bound(q)
        for a in range(q):
            for b in range(q):
                v = cs.kloosterman(a, b, ctx).value
                bound = float(q - 1) if a == b == 0 else wb
                yield a, b, v, bound, abs(v) <= bound + 1e-9
    elif kind == "ndiff":
        counts = cs.diff_square_counts(ctx)
        for t in range(q):
            expected = 2 * q - 1 if t == 0 else q - 1
            yield t, "", complex(counts[t]), float(expected), int(counts[t]) == expected
    elif kind == "sphere":
        check_grid(q, d)
        closed = cs.sphere_fourier_grid(r, ctx, d)
        bound = 2 * q ** (-(d + 1) / 2)
        for m in np.ndindex(*closed.shape):
            v = closed[m]
            label = ":".join(map(str, m))
            if any(m):
                yield r, label, v, bound, abs(v) <= bound + 1e-12
            else:
                yield r, label, v, float("nan"), True
    else:
        raise ValueError(f"unknown sum kind {kind!r}")


def cmd_sums(args) -> int:
    ctx = FieldCtx(args.q)
    with _output(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMS_FIELDS)
        ok_all = True
        for p1, p2, v, bound, ok in _sums_rows(args.kind, ctx, args.d, args.r):
            ok_all &= bool(ok)
            v = complex(v)
            writer.writerow([args.kind, p1, p2, repr(v.real), repr(v.imag), repr(abs(v)),
                             repr(float(bound)), "true" if ok else "false"])
    return EXIT_OK if ok_all else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffdistance", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a point set file")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, default=1, help="sphere radius")
    p.add_argument("--n", default=None, help="random cardinality: integer, 'crit' or 'falconer'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="analyze one set file")
    p.add_argument("set_file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--family", default=None, help="family label for the report row")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--spectrum", default=None, help="also dump the spectrum as CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="analyze a Cartesian product of sets")
    p.add_argument("--config", default=None, help="key = value sweep file")
    p.add_argument("--q", default=None, help="comma-separated primes")
    p.add_argument("--d", default=None, help="comma-separated dimensions")
    p.add_argument("--families", default=None, help="e.g. full,sphere:r=1,random:n=crit")
    p.add_argument("--seed", default=None, help="comma-separated seeds")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--max-q", type=int, default=31)
    p.add_argument("--dims", default="2,3")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sums", help="dump character-sum tables")
    p.add_argument("--kind", required=True, choices=("gauss", "kloosterman", "ndiff", "sphere"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sums)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, FieldError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
