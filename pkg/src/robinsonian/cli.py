"""Command-line front end.

Exit codes: 0 Robinsonian / verified / success, 1 NotRobinsonian / failed
check, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .instances import KINDS, GeneratorSpec
from .matrix import MatrixError, load, load_dissimilarity, resolve_scale, write_matrix_market
from .oracle import BRUTE_FORCE_LIMIT, brute_force_robinsonian, robinson_triple_scan
from .recognize import (
    NotBinaryError,
    dissimilarity_violation,
    recognize,
    recognize_binary_3sweep,
    recognize_dissimilarity,
    robinson_violation,
)
from .sfs import LinearOrder, SweepTrace, disfs, disfs_plus, sfs, sfs_plus

log = logging.getLogger("robinsonian")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_order(spec: str, n: int) -> LinearOrder:
    """``identity``, ``reversed``, a file with one line of 1-based ids, or the ids inline."""
    if spec == "identity":
        return LinearOrder.identity(n)
    if spec == "reversed":
        return LinearOrder.identity(n).reversed()
    text = spec
    if os.path.exists(spec):
        try:
            text = Path(spec).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read order file {spec}: {e}") from None
    try:
        order = LinearOrder.parse(text)
    except ValueError as e:
        raise UsageError(f"bad order {spec!r}: {e}") from None
    if len(order) != n:
        raise UsageError(f"order has {len(order)} vertices, matrix has {n}")
    return order


def _load(args):
    try:
        if getattr(args, "dissimilarity", False):
            return load_dissimilarity(Path(args.input).read_bytes(), args.scale)
        return load(args.input, args.scale, getattr(args, "shift", False))
    except (OSError, MatrixError) as e:
        raise UsageError(f"{args.input}: {e}") from None


def _sidecar_seed(path: str) -> int | None:
    side = Path(path).with_suffix(".json")
    try:
        return int(json.loads(side.read_text(encoding="utf-8"))["spec"]["seed"])
    except (OSError, ValueError, KeyError, TypeError):
        return None


def _print_report(report, as_json: bool, out) -> None:
    if as_json:
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
        return
    out.write(f"status: {report.status}\n")
    out.write(f"sweeps_used: {report.sweeps_used}\n")
    if report.robinsonian:
        out.write(f"order: {report.ordering.to_line()}\n")
    else:
        c = report.certificate.to_dict(report.scale)
        x, y, z = c["triple"]
        w = c["weights"]
        out.write(f"certificate: ({x}, {y}, {z}) with A_xy={w['xy']} A_yz={w['yz']} A_xz={w['xz']}\n")


# -- commands -----------------------------------------------------------------


def cmd_recognize(args) -> int:
    A = _load(args)
    seed = read_order(args.seed_order, A.n) if args.seed_order else None
    if args.dissimilarity:
        report = recognize_dissimilarity(A, seed, early_exit=not args.no_early_exit)
    elif args.binary:
        try:
            report = recognize_binary_3sweep(A, seed)
        except NotBinaryError as e:
            raise UsageError(str(e)) from None
    else:
        initial = read_order(args.initial, A.n) if args.initial else None
        report = recognize(A, seed, initial=initial, early_exit=not args.no_early_exit)
    report.seed = _sidecar_seed(args.input)
    _print_report(report, args.json, sys.stdout)
    if args.output_order and report.robinsonian:
        Path(args.output_order).write_text(report.ordering.to_line() + "\n", encoding="utf-8")
    return EXIT_OK if report.robinsonian else EXIT_FAIL


def cmd_verify(args) -> int:
    A = _load(args)
    pi = read_order(args.order, A.n)
    check = dissimilarity_violation if args.dissimilarity else robinson_violation
    bad = check(A, pi)
    if args.oracle and not args.dissimilarity:
        scan = robinson_triple_scan(A, pi)
        if (scan is None) != (bad is None):
            print("oracle disagreement: cubic scan and fast check differ", file=sys.stderr)
            return EXIT_FAIL
        if A.n <= BRUTE_FORCE_LIMIT:
            exists = brute_force_robinsonian(A) is not None
            print(f"brute force: {'Robinsonian' if exists else 'NotRobinsonian'}")
            if bad is None and not exists:  # pragma: no cover - a Robinson order proves existence
                print("oracle disagreement: brute force found no ordering", file=sys.stderr)
                return EXIT_FAIL
    if bad is None:
        print("verified: Robinson ordering")
        return EXIT_OK
    c = bad.to_dict(A.scale)
    print(f"violation: {tuple(c['triple'])} xy={c['weights']['xy']} yz={c['weights']['yz']} xz={c['weights']['xz']}")
    return EXIT_FAIL


def cmd_sweep(args) -> int:
    A = _load(args)
    trace = SweepTrace() if args.trace else None
    if args.plus:
        sigma = read_order(args.plus, A.n)
        out = (disfs_plus if args.dissimilarity else sfs_plus)(A, sigma, trace)
    else:
        seed = read_order(args.seed_order, A.n) if args.seed_order else None
        out = (disfs if args.dissimilarity else sfs)(A, seed, trace)
    if trace is not None:
        for line in trace.lines():
            print(line, file=sys.stderr)
    print(out.to_line())
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        k=args.k,
        density=args.density,
        perturbations=args.perturbations,
        max_width=args.max_width,
        max_weight=args.max_weight,
        permute=not args.no_permute,
    )
    try:
        A, meta = spec.build()
    except ValueError as e:
        raise UsageError(str(e)) from None
    out = Path(args.output)
    try:
        write_matrix_market(A, str(out))
        out.with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        if "sigma0" in meta:
            out.with_suffix(".sigma0.txt").write_text(" ".join(map(str, meta["sigma0"])) + "\n", encoding="utf-8")
        if "hidden_order" in meta:
            out.with_suffix(".order.txt").write_text(
                " ".join(map(str, meta["hidden_order"])) + "\n", encoding="utf-8"
            )
    except OSError as e:
        raise UsageError(f"cannot write {out}: {e}") from None
    print(f"wrote {out} (n={A.n}, m={A.m})")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        grid = [int(t) for t in args.grid.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad grid {args.grid!r}") from None
    rows = bench_mod.run(grid, args.kind, args.seed, args.width, args.repeats)
    sys.stdout.write(bench_mod.to_csv(rows) if args.format == "csv" else bench_mod.to_text(rows))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    A = _load(args)
    if A.n > args.limit:
        raise UsageError(f"brute force limited to n <= {args.limit}, matrix has n={A.n}")
    fast = recognize(A)
    slow = brute_force_robinsonian(A, args.limit)
    slow_status = "Robinsonian" if slow is not None else "NotRobinsonian"
    print(f"recognize:   {fast.status}")
    print(f"brute force: {slow_status}")
    if slow is not None:
        print(f"first Robinson ordering: {slow.to_line()}")
    agree = fast.status == slow_status
    print("agree" if agree else "DISAGREE")
    return EXIT_OK if agree else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def _scale(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("scale must be a positive integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("scale must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robinsonian", description="Recognize Robinsonian matrices by multisweep SFS.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def matrix_args(q, shift=True):
        q.add_argument("input", help="Matrix Market (.mtx) or dense CSV file")
        q.add_argument("--scale", type=_scale, default=None,
                       help="quantization factor for real weights (default: $SFS_SCALE or 10^6)")
        if shift:
            q.add_argument("--shift", action="store_true", help="add -min(entry) to make entries nonnegative")
        q.add_argument("--dissimilarity", action="store_true", help="treat input as a dissimilarity")

    q = sub.add_parser("recognize", help="decide whether a matrix is Robinsonian")
    matrix_args(q)
    q.add_argument("--seed-order", help="tie-break order for the first sweep: identity, file or ids")
    q.add_argument("--initial", help="use this order as the first sweep instead of computing it")
    q.add_argument("--no-early-exit", action="store_true")
    q.add_argument("--binary", action="store_true", help="three-sweep test for 0/1 matrices")
    q.add_argument("--json", action="store_true")
    q.add_argument("--output-order", help="write the Robinson ordering to this file")
    q.set_defaults(func=cmd_recognize)

    q = sub.add_parser("verify", help="check that an ordering is Robinson")
    matrix_args(q)
    q.add_argument("order", help="identity, reversed, file or ids")
    q.add_argument("--oracle", action="store_true", help="cross-check with the cubic scan and brute force")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("sweep", help="run a single SFS, SFS+ or dissimilarity sweep")
    matrix_args(q)
    q.add_argument("--seed-order", help="tie-break order for a plain sweep")
    q.add_argument("--plus", metavar="ORDER", help="run SFS+ breaking ties by the last vertex of ORDER")
    q.add_argument("--trace", action="store_true", help="print pivot, slice size and class count per step to stderr")
    q.set_defaults(func=cmd_sweep)

    q = sub.add_parser("generate", help="write a generated instance as Matrix Market plus a JSON sidecar")
    q.add_argument("kind", choices=KINDS)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--k", type=int, default=None, help="interval blocks (default n)")
    q.add_argument("--density", type=float, default=0.5)
    q.add_argument("--perturbations", type=int, default=1)
    q.add_argument("--max-width", type=int, default=None)
    q.add_argument("--max-weight", type=int, default=5)
    q.add_argument("--no-permute", action="store_true")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_generate)

    q = sub.add_parser("bench", help="time sweeps and recognition over a size grid")
    q.add_argument("--grid", default="1000,10000", help="comma-separated sizes")
    q.add_argument("--kind", choices=("random_robinsonian", "binary"), default="random_robinsonian")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--width", type=int, default=12)
    q.add_argument("--repeats", type=int, default=3)
    q.add_argument("--format", choices=("csv", "text"), default="csv")
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("oracle-check", help="compare recognize with brute force on a small matrix")
    q.add_argument("input")
    q.add_argument("--scale", type=_scale, default=None)
    q.add_argument("--shift", action="store_true")
    q.add_argument("--limit", type=int, default=BRUTE_FORCE_LIMIT)
    q.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        if getattr(args, "scale", None) is None:
            args.scale = resolve_scale(None)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
