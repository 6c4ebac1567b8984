"""Command-line front end.

Exit codes: 0 success, 1 an addressing failed verification, 2 invalid
input or a violated precondition, 3 a search budget ran out before a
proof was complete.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .addressing import (
    Addressing,
    complete_graph_addressing,
    cycle_addressing,
    format_addressing,
    hadamard_addressing,
    hamming_matrix,
    k4_addressing,
    parse_addressing,
    path_addressing,
    slack,
    tree_addressing,
    verify,
)
from .bounds import HELD_KARP_CAP, SUBSET_CAP, bounds, lower_bounds
from .errors import BsepError, BudgetExceeded, ValidationError
from .exact import (
    DEFAULT_NODE_LIMIT,
    ExactResult,
    SearchConfig,
    branch_and_bound_c,
    brute_force_c,
    constructive_addressings,
)
from .graph import WeightedGraph, cycle_weights, format_graph, parse_graph, path_weights
from .lee import LeeQuery, format_table, lee_upper, reproduce_table
from .lp import PRIMAL_CAP, build_dual, build_primal, candidate_mu, solve_exact, to_lp_format
from .products import certify_product_exact, factor_value, product_graph, product_upper

EXIT_OK, EXIT_REJECTED, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        v = int(raw)
    except ValueError:
        raise ValidationError(f"environment variable {name} must be an integer, got {raw!r}") from None
    if v < 1:
        raise ValidationError(f"environment variable {name} must be positive")
    return v


def _cap(args, attr: str, env: str, default: int) -> int:
    v = getattr(args, attr, None)
    return v if v is not None else _env_int(env, default)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> WeightedGraph:
    g = parse_graph(_read(path))
    g.require_connected()
    return g


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _emit_kv(pairs, out):
    for k, v in pairs:
        out.write(f"{k}={v}\n")


def _witness_block(a: Addressing) -> str:
    return "witness:\n" + format_addressing(a)


# -- subcommands -----------------------------------------------------------

def cmd_bounds(args, out) -> int:
    g = _load_graph(args.graph)
    rep = bounds(
        g,
        args.lam,
        subset_cap=_cap(args, "subset_cap", "BSEP_SUBSET_CAP", SUBSET_CAP),
        held_karp_cap=_cap(args, "held_karp_cap", "BSEP_HELD_KARP_CAP", HELD_KARP_CAP),
    )
    out.write(rep.to_kv() if args.format == "kv" else rep.to_table())
    return EXIT_OK


def cmd_exact(args, out) -> int:
    g = _load_graph(args.graph)
    dm = g.distances
    node_limit = _cap(args, "node_limit", "BSEP_NODE_LIMIT", DEFAULT_NODE_LIMIT)
    primal_cap = _cap(args, "primal_cap", "BSEP_PRIMAL_CAP", PRIMAL_CAP)
    name = "c" if args.lam == 1 else f"c_{args.lam}"
    try:
        if args.method == "bnb":
            res = branch_and_bound_c(dm, args.lam, node_limit=node_limit, primal_cap=primal_cap)
        else:
            cfg = SearchConfig(max_length=args.max_length, node_limit=node_limit)
            res = brute_force_c(dm, args.lam, cfg)
    except BudgetExceeded as exc:
        res = _settle_from_bounds(dm, args.lam, exc)
        if res is None:
            rep = lower_bounds(dm, args.lam)
            lo = max(exc.lower or 0, rep.best_lower)
            cands = [a for _, a in constructive_addressings(dm, args.lam)]
            hi = min([a.length for a in cands] + ([exc.upper] if exc.upper is not None else []))
            if args.format == "kv":
                _emit_kv([(name, "unknown"), ("proven", "no"), ("lower", lo), ("upper", hi), ("reason", exc)], out)
            else:
                out.write(f"{name} in [{lo}, {hi}] (not proven: {exc})\n")
            return EXIT_BUDGET
    if args.addr_out:
        with open(args.addr_out, "w", encoding="utf-8") as fh:
            fh.write(format_addressing(res.witness))
    if args.format == "kv":
        pairs = [(name, res.value), ("proven", "yes"), ("lower_bound_rule", res.lower_rule)]
        pairs += [(f"witness.{i}", r or "-") for i, r in enumerate(res.witness.rows())]
        _emit_kv(pairs, out)
    else:
        out.write(f"{name} = {res.value} (proven; lower bound rule = {res.lower_rule})\n")
        out.write(res.certificate() + "\n")
        out.write(_witness_block(res.witness))
    return EXIT_OK


def _settle_from_bounds(dm, lam, exc):
    """A constructive addressing meeting the proven lower bound still settles c."""
    rep = lower_bounds(dm, lam)
    lo, rule = rep.best_lower, rep.best_lower_rule
    if exc.lower is not None and exc.lower > lo:
        lo, rule = exc.lower, "exhaustive search"
    cands = [a for _, a in constructive_addressings(dm, lam)]
    if not cands:
        return None
    best = min(cands, key=lambda a: a.length)
    if best.length > lo:
        return None
    return ExactResult(best.length, best, rule, lam)


def cmd_beta(args, out) -> int:
    g = _load_graph(args.graph)
    dm = g.distances
    primal_cap = _cap(args, "primal_cap", "BSEP_PRIMAL_CAP", PRIMAL_CAP)
    primal = build_primal(dm, 1, primal_cap)
    if args.export_lp:
        with open(args.export_lp, "w", encoding="utf-8") as fh:
            fh.write(to_lp_format(build_dual(dm, primal_cap) if args.dual else primal))
    if g.n == 1:
        value, mu, support, dual_value = Fraction(0), 1, {}, Fraction(0)
    else:
        sol = solve_exact(primal)
        value, mu = sol.value, candidate_mu(sol)
        support = {k: v for k, v in sol.assignment.items() if v}
        dual_value = solve_exact(build_dual(dm, primal_cap)).value if args.dual else None
    if args.format == "kv":
        pairs = [("beta", value), ("candidate_mu", mu)]
        if args.dual:
            pairs.append(("dual_value", dual_value))
        pairs += [(f"x.{k}", v) for k, v in sorted(support.items())]
        _emit_kv(pairs, out)
    else:
        out.write(f"beta = {value}, candidate mu = {mu}\n")
        if args.dual:
            out.write(f"dual optimum = {dual_value}\n")
        for k, v in sorted(support.items()):
            out.write(f"  {k} = {v}\n")
    return EXIT_OK


def _scheme_addressing(g: WeightedGraph, scheme: str, lam: int) -> Addressing:
    dm = g.distances
    if scheme == "path":
        pw = path_weights(g)
        if pw is None:
            raise ValidationError("scheme 'path' needs a path graph")
        order, ws = pw
        if g.n == 1:
            return Addressing(np.zeros((1, 0), dtype=np.uint8))
        along = path_addressing([lam * w for w in ws])
        bits = along.bits.copy()
        bits[order] = along.bits
        return Addressing(bits)
    if scheme == "cycle":
        cw = cycle_weights(g)
        if cw is None:
            raise ValidationError("scheme 'cycle' needs a cycle graph")
        order, ws = cw
        around = cycle_addressing([lam * w for w in ws])
        bits = around.bits.copy()
        bits[order] = around.bits
        return Addressing(bits)
    if scheme == "tree":
        scaled = WeightedGraph(g.n, tuple((u, v, lam * w) for u, v, w in g.edges))
        return tree_addressing(scaled)
    if scheme == "clique":
        if not (g.is_complete() and g.is_unit()):
            raise ValidationError("scheme 'clique' needs a complete graph with unit weights")
        base = complete_graph_addressing(g.n)
        return Addressing(np.hstack([base.bits] * lam)) if base.length else base
    if scheme == "hadamard":
        return hadamard_addressing(dm, lam)
    if scheme == "k4":
        return k4_addressing(dm.scaled(lam))
    # auto: shortest verified addressing among every scheme that applies
    cands = [a for _, a in constructive_addressings(dm, lam)]
    for s in ("path", "cycle", "tree", "clique", "k4"):
        try:
            cands.append(_scheme_addressing(g, s, lam))
        except BsepError:
            pass
    cands = [a for a in cands if verify(a, dm, lam)]
    return min(cands, key=lambda a: a.length)


def cmd_address(args, out) -> int:
    g = _load_graph(args.graph)
    a = _scheme_addressing(g, args.scheme, args.lam)
    if not verify(a, g.distances, args.lam):
        raise ValidationError(f"scheme {args.scheme!r} does not apply to this graph")
    text = format_addressing(a)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    out.write(text)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    g = _load_graph(args.graph)
    a = parse_addressing(_read(args.addr))
    dm = g.distances
    ok = verify(a, dm, args.lam)
    s = slack(a, dm, args.lam)
    bad = None
    if not ok:
        h = hamming_matrix(a)
        need = dm.d * args.lam
        i, j = min(
            ((i, j) for i in range(a.n) for j in range(i + 1, a.n) if h[i, j] < need[i, j]),
        )
        bad = (i, j, int(h[i, j]), int(need[i, j]))
    if args.format == "kv":
        pairs = [("valid", "yes" if ok else "no"), ("length", a.length), ("min_slack", "none" if s is None else s)]
        if bad:
            pairs.append(("first_violation", f"{bad[0]},{bad[1]}"))
        _emit_kv(pairs, out)
    elif ok:
        out.write(f"valid: length {a.length}, minimum slack {s if s is not None else 'n/a'}\n")
    else:
        i, j, h, need = bad
        out.write(f"invalid: vertices {i} and {j} are at Hamming distance {h} < {need}\n")
    return EXIT_OK if ok else EXIT_REJECTED


def cmd_lee(args, out) -> int:
    lambda_max = _cap(args, "lambda_max", "BSEP_LAMBDA_MAX", 4)
    b = lee_upper(LeeQuery(args.q, args.n, args.d, lambda_max))
    if args.format == "kv":
        _emit_kv(
            [
                ("bound", b.value),
                ("lambda", b.witness_lambda),
                ("binary_length", b.binary_params[0]),
                ("binary_distance", b.binary_params[1]),
                ("plotkin_case", b.plotkin_case),
            ],
            out,
        )
    else:
        out.write(b.describe() + "\n")
    return EXIT_OK


def cmd_lee_table(args, out) -> int:
    lambda_max = _cap(args, "lambda_max", "BSEP_LAMBDA_MAX", 4)
    rows = reproduce_table(lambda_max)
    out.write(format_table(rows, args.format))
    return EXIT_OK


def cmd_product(args, out) -> int:
    gs = [_load_graph(p) for p in args.factors]
    prod = product_graph(gs)
    kv = args.format == "kv"
    cert = None
    if args.certify:
        cert = certify_product_exact(gs)
    if cert is not None:
        addr = cert.addressing
    else:
        vals = [factor_value(g) for g in gs]
        if any(v is None for v in vals):
            raise ValidationError("a factor is outside the supported families and too large to search")
        addr = product_upper([v.witness for v in vals])
    if args.graph_out:
        with open(args.graph_out, "w", encoding="utf-8") as fh:
            fh.write(format_graph(prod))
    if args.addr_out:
        with open(args.addr_out, "w", encoding="utf-8") as fh:
            fh.write(format_addressing(addr))
    if kv:
        pairs = [("vertices", prod.n), ("edges", prod.m), ("upper", addr.length)]
        if args.certify:
            pairs.append(("certified", "yes" if cert else "unknown"))
            if cert:
                pairs += [("c", cert.value), ("function", cert.function), ("lower_value", cert.lower_value)]
                if cert.beta is not None:
                    pairs.append(("beta", cert.beta))
        _emit_kv(pairs, out)
        return EXIT_OK
    out.write(f"product: {prod.n} vertices, {prod.m} edges\n")
    out.write(f"concatenation upper bound: {addr.length}\n")
    if args.certify:
        if cert:
            out.write(cert.describe() + "\n")
            if cert.beta is not None:
                out.write(f"beta = {cert.beta} (sum over cycle factors)\n")
        else:
            out.write("certificate: unknown (no lower bound reaches the concatenation length)\n")
    out.write("graph:\n" + format_graph(prod))
    out.write("addressing:\n" + format_addressing(addr))
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsep", description="Binary addressings of edge-weighted graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, lam=False):
        sp.add_argument("--format", choices=("table", "kv"), default="table")
        if graph:
            sp.add_argument("--graph", required=True, help="graph file ('-' for stdin)")
        if lam:
            sp.add_argument("--lambda", dest="lam", type=_positive, default=1, help="distance scale")

    sp = sub.add_parser("bounds", help="closed-form lower and upper bounds")
    common(sp, lam=True)
    sp.add_argument("--subset-cap", type=_positive)
    sp.add_argument("--held-karp-cap", type=_positive)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("exact", help="certified exact value with a witness")
    common(sp, lam=True)
    sp.add_argument("--method", choices=("search", "bnb"), default="search")
    sp.add_argument("--node-limit", type=_positive)
    sp.add_argument("--primal-cap", type=_positive)
    sp.add_argument("--max-length", type=int)
    sp.add_argument("--addr-out", help="write the witness addressing here")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("beta", help="exact fractional value from the cut LP")
    common(sp)
    sp.add_argument("--primal-cap", type=_positive)
    sp.add_argument("--dual", action="store_true", help="solve the dual cut-weighting program")
    sp.add_argument("--export-lp", help="write the program in CPLEX LP format")
    sp.set_defaults(func=cmd_beta)

    sp = sub.add_parser("address", help="constructive addressing")
    common(sp, lam=True)
    sp.add_argument("--scheme", choices=("path", "cycle", "tree", "clique", "hadamard", "k4", "auto"), default="auto")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_address)

    sp = sub.add_parser("verify", help="check an addressing against a graph")
    common(sp, lam=True)
    sp.add_argument("--addr", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("lee", help="upper bound on A_q^L(n, d)")
    common(sp, graph=False)
    sp.add_argument("q", type=_positive)
    sp.add_argument("n", type=_positive)
    sp.add_argument("d", type=_positive)
    sp.add_argument("--lambda-max", type=_positive)
    sp.set_defaults(func=cmd_lee)

    sp = sub.add_parser("lee-table", help="recompute the improved Lee bounds table")
    common(sp, graph=False)
    sp.add_argument("--lambda-max", type=_positive)
    sp.set_defaults(func=cmd_lee_table)

    sp = sub.add_parser("product", help="Cartesian product of factor graphs")
    common(sp, graph=False)
    sp.add_argument("--factors", nargs="+", required=True)
    sp.add_argument("--certify", action="store_true")
    sp.add_argument("--graph-out")
    sp.add_argument("--addr-out")
    sp.set_defaults(func=cmd_product)
    return p


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"bsep: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (BsepError, OSError, ValueError) as exc:
        print(f"bsep: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
