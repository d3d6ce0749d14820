"""Command-line front end: ``liptree <command> [options]``.

Commands write a JSON report to stdout (or ``--out``).  Exit status is 0 on
success, 1 when a verification check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import testfns
from .exact import exact_operator_norm
from .expr import ExprSyntaxError
from .operators import TailConfig, analyze
from .oracle import random_search
from .report import dumps, profile_csv
from .spaces import norm_k
from .symbols import RadialSymbol, SymbolError, load_symbol
from .tree import TreeError, TreeShape, VertexId, build_truncation
from .verify import DEFAULT_TRIALS, SUITES, run_suite
from .weights import WeightDomainError, ell_and_Lambda

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _tree_args(p: argparse.ArgumentParser, depth: int = 8):
    g = p.add_argument_group("tree")
    g.add_argument("--branching", type=int, default=2, help="uniform child count (default 2)")
    g.add_argument("--branching-per-level", metavar="B0,B1,...",
                   help="child counts per level; the last one repeats")
    g.add_argument("--depth", type=int, default=depth, help=f"truncation depth D (default {depth})")
    g.add_argument("--vertex-cap", type=int, default=None,
                   help="refuse trees with more vertices (default $LIPTREE_VERTEX_CAP or 10^7)")


def _symbol_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--symbol", metavar="FILE", help="symbol JSON file")
    g.add_argument("--symbol-expr", metavar="EXPR", help="radial symbol expression in x = |v|")


def _out_args(p: argparse.ArgumentParser):
    p.add_argument("--out", metavar="FILE", help="write the JSON report here instead of stdout")


def _build_tree(args):
    if args.branching_per_level:
        try:
            counts = tuple(int(c) for c in args.branching_per_level.split(",") if c.strip())
        except ValueError:
            raise InputError(f"--branching-per-level: not a comma-separated list of integers: "
                             f"{args.branching_per_level!r}") from None
        shape = TreeShape(counts)
    else:
        shape = TreeShape(args.branching)
    return build_truncation(shape, args.depth, args.vertex_cap)


def _load_symbol(args):
    if args.symbol_expr is not None:
        try:
            return RadialSymbol(args.symbol_expr)
        except ExprSyntaxError as e:
            raise InputError(f"--symbol-expr: {e}") from None
    try:
        return load_symbol(args.symbol)
    except OSError as e:
        raise InputError(f"--symbol {args.symbol}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"--symbol {args.symbol}: invalid JSON at line {e.lineno} column {e.colno} "
                         f"(offset {e.pos}): {e.msg}") from None
    except ExprSyntaxError as e:
        raise InputError(f"--symbol {args.symbol}: expression {e}") from None
    except SymbolError as e:
        raise InputError(f"--symbol {args.symbol}: {e}") from None


def _emit(args, payload: dict):
    text = dumps(payload)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_weights(args) -> int:
    ells, lams = ell_and_Lambda(args.k, args.x)
    _emit(args, {"x": args.x, "k": args.k, "ell": ells, "Lambda": lams})
    return EXIT_OK


def cmd_testfn(args) -> int:
    t = _build_tree(args)
    vertex = VertexId.parse(args.vertex) if args.vertex is not None else None
    f = testfns.make(args.kind, t, vertex, args.m)
    payload = {
        "kind": args.kind,
        "m": args.m,
        "vertex": None if vertex is None else str(vertex),
        "branching": t.shape.describe(),
        "depth": t.depth,
        "norm": norm_k(f, args.m).as_dict(),
        "values": [[z.real, z.imag] for z in f.values],
    }
    _emit(args, payload)
    return EXIT_OK


def _indices(args):
    if args.k is not None:
        if args.m is not None or args.n is not None:
            raise InputError("give either --k or --m/--n")
        return args.k, args.k
    if args.m is None or args.n is None:
        raise InputError("--m and --n are required (or --k for a single space)")
    if args.m < 0 or args.n < 0:
        raise InputError("space indices must be non-negative")
    return args.m, args.n


def cmd_analyze(args) -> int:
    t = _build_tree(args)
    psi = _load_symbol(args)
    m, n = _indices(args)
    rep = analyze(psi, m, n, t, exact=args.exact, tail=TailConfig(args.eps_tail, args.band))
    payload = {"symbol": psi.as_dict() if hasattr(psi, "as_dict") else None, **rep.as_dict()}
    if args.csv:
        prof = rep.profile
        with open(args.csv, "w") as fh:
            fh.write(profile_csv(range(1, t.depth + 1), prof.mu_by_depth, prof.nu_by_depth))
    _emit(args, payload)
    return EXIT_OK


def cmd_exact_norm(args) -> int:
    t = _build_tree(args)
    psi = _load_symbol(args)
    m, n = _indices(args)
    sol = exact_operator_norm(psi, m, n, t)
    search = random_search(psi, m, n, t, args.trials, args.seed)
    payload = {
        "symbol": psi.as_dict(),
        "branching": t.shape.describe(),
        **sol.as_dict(),
        "oracle": {"trials": args.trials, "seed": args.seed, **search.as_dict()},
        "oracle_le_exact": search.best <= sol.value + 1e-9,
    }
    _emit(args, payload)
    return EXIT_OK if payload["oracle_le_exact"] else EXIT_FAILED


def cmd_verify(args) -> int:
    t = _build_tree(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(name, args.trials, args.seed, t) for name in names]
    payload = reports[0] if len(reports) == 1 else {
        "suite": "all", "seed": args.seed, "passed": all(r["passed"] for r in reports), "suites": reports,
    }
    _emit(args, payload)
    for r in reports:
        for fail in r["failures"]:
            print(f"FAILED {r['suite']}: {json.dumps(fail, default=str)}", file=sys.stderr)
    return EXIT_OK if payload["passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liptree",
        description="Iterated logarithmic Lipschitz spaces on rooted trees and multiplication operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weights", help="print ell_0..ell_K and Lambda_0..Lambda_K at x")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    _out_args(p)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("testfn", help="emit a test function as JSON")
    p.add_argument("--kind", required=True, choices=testfns.KINDS)
    p.add_argument("--vertex", help="child-index path such as 0/1/0 ('o' for the root)")
    p.add_argument("--m", type=int, default=0)
    _tree_args(p)
    _out_args(p)
    p.set_defaults(func=cmd_testfn)

    for name, func, helptext in (
        ("analyze", cmd_analyze, "mu/nu profiles, norm bounds, tail diagnostics"),
        ("exact-norm", cmd_exact_norm, "exact truncated operator norm with witness and random-search check"),
    ):
        p = sub.add_parser(name, help=helptext)
        _symbol_args(p)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int, help="use m = n = k")
        _tree_args(p, depth=12 if name == "analyze" else 10)
        _out_args(p)
        if name == "analyze":
            p.add_argument("--exact", action="store_true", help="also compute the exact truncated norm")
            p.add_argument("--csv", metavar="FILE", help="per-depth mu/nu maxima as CSV")
            p.add_argument("--eps-tail", type=float, default=TailConfig.eps_tail)
            p.add_argument("--band", type=float, default=TailConfig.band)
        else:
            p.add_argument("--trials", type=int, default=10_000)
            p.add_argument("--seed", type=int, default=7)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run a randomized verification suite")
    p.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    p.add_argument("--trials", type=int, default=None,
                   help="samples per suite (defaults: " +
                   ", ".join(f"{k}={v}" for k, v in DEFAULT_TRIALS.items()) + ")")
    p.add_argument("--seed", type=int, default=0)
    _tree_args(p)
    _out_args(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, TreeError, SymbolError, WeightDomainError, ValueError) as e:
        print(f"liptree {args.command}: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
