"""Command-line front end.

Subcommands cover the ordering, coloring, forest, model-checking,
dominating-set, and circuit-reduction pipelines, all reading the
line-based file formats of their modules.  Output is deterministic for a
fixed seed.  Exit codes: 0 success, 1 input error, 2 promise or resource
guard violation, 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import random
import sys

from .degeneracy import (block_ordering, color_bounded_degree,
                         color_degenerate, greedy_degeneracy_ordering,
                         serialize_coloring)
from .domset import domset_approx, domset_exact, is_dominating
from .graphs import (ClassParams, GraphFormatError, OracleOverflow,
                     PromiseViolation, parse_graph, serialize_blocks)
from .hardness import (circuit_to_graph, degeneracy_le, eval_circuit,
                       gadget_self_test, normalize_circuit, parse_circuit)
from .logic import (FormulaParseError, ReductionOverflow, Vocabulary,
                    model_check, naive_eval, parse_formula, parse_structure)
from .treedepth import dfs_forest, low_treedepth_coloring, serialize_forest
from .wcol import (BconnConfig, adm_block_ordering, bconn_at_least,
                   bconn_exact, g_bound, wcol_measure, wcol_ordering)

ORACLE_N_CAP = 32


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from exc


def _params(args) -> ClassParams:
    return ClassParams(r=args.r, d=args.d, p=args.p)


def _cfg(args) -> BconnConfig:
    return BconnConfig(mode=args.bconn_mode, trials=args.trials,
                       seed=args.seed)


def _print_ledger(args, ledger) -> None:
    if args.ledger:
        for line in ledger.lines():
            print(line)


def _cmd_order(args) -> int:
    G = parse_graph(_read(args.graph))
    if args.kind == "greedy":
        sigma, dgn = greedy_degeneracy_ordering(G)
        print("order", *sigma.order)
        print(f"degeneracy = {dgn}")
        if args.oracle:
            lo = next(c for c in range(G.n + 1) if degeneracy_le(G, c))
            if lo != dgn:
                print(f"oracle mismatch: elimination threshold {lo}",
                      file=sys.stderr)
                return 3
        return 0
    if args.kind == "block":
        tau, ledger = block_ordering(G, args.d)
        print(serialize_blocks(tau), end="")
        _print_ledger(args, ledger)
        return 0
    if args.kind == "adm":
        tau, ledger = adm_block_ordering(G, _params(args), _cfg(args))
        print(serialize_blocks(tau), end="")
        _print_ledger(args, ledger)
        return 0
    sigma, ledger = wcol_ordering(G, _params(args), _cfg(args))
    measured = wcol_measure(G, sigma, args.r)
    print("order", *sigma.order)
    print(f"wcol_{args.r} = {measured} (bound {g_bound(args.r, args.d)})")
    _print_ledger(args, ledger)
    return 0


def _cmd_color(args) -> int:
    G = parse_graph(_read(args.graph))
    if args.kind == "bnddeg":
        delta = args.delta if args.delta is not None else G.max_degree()
        col, ledger = color_bounded_degree(G, delta)
    elif args.kind == "degenerate":
        col, ledger = color_degenerate(G, args.d)
    else:
        col, ledger = low_treedepth_coloring(G, _params(args), _cfg(args))
    print(serialize_coloring(col), end="")
    print(f"colors used = {col.used_colors()}")
    _print_ledger(args, ledger)
    return 0


def _cmd_forest(args) -> int:
    G = parse_graph(_read(args.graph))
    F, ledger = dfs_forest(G, args.h)
    print(serialize_forest(F), end="")
    print(f"depth = {F.depth}")
    _print_ledger(args, ledger)
    return 0


def _cmd_mc(args) -> int:
    A = parse_structure(_read(args.structure))
    voc = Vocabulary.make(sorted(A.unary), sorted(A.binary))
    phi = parse_formula(args.formula, voc)
    got = model_check(A, phi, _params(args), _cfg(args))
    print("true" if got else "false")
    if args.oracle:
        if A.n > ORACLE_N_CAP:
            print(f"oracle skipped: n = {A.n} exceeds cap {ORACLE_N_CAP}",
                  file=sys.stderr)
            return 2
        want = naive_eval(A, phi)
        if want != got:
            print(f"oracle mismatch: naive evaluation says {want}",
                  file=sys.stderr)
            return 3
    return 0


def _cmd_domset(args) -> int:
    G = parse_graph(_read(args.graph))
    D, sigma, bound = domset_approx(G, args.r, _params(args), _cfg(args))
    if not is_dominating(G, D, args.r):
        print("internal error: output set does not dominate", file=sys.stderr)
        return 2
    print("domset", *D)
    print(f"size = {len(D)} (factor bound {bound})")
    if args.oracle:
        if G.n > 15:
            print(f"oracle skipped: n = {G.n} exceeds cap 15", file=sys.stderr)
            return 2
        opt = domset_exact(G, args.r)
        print(f"optimum = {opt}")
        if len(D) > bound * opt:
            print("oracle mismatch: size exceeds factor bound",
                  file=sys.stderr)
            return 3
    return 0


def _cmd_reduce_circuit(args) -> int:
    gadget_self_test()
    C = normalize_circuit(parse_circuit(_read(args.circuit)))
    value = eval_circuit(C)
    G, _ = circuit_to_graph(C)
    sparse = degeneracy_le(G, 2)
    agree = sparse == value
    print(f"degeneracy<=2: {str(sparse).lower()}  "
          f"eval: {str(value).lower()}  agree: {str(agree).lower()}")
    return 0 if agree else 3


def _cmd_check(args) -> int:
    if args.what == "mc":
        if not args.structure or not args.formula:
            raise GraphFormatError("check mc needs --structure and --formula")
        args.oracle = True
        return _cmd_mc(args)
    if args.what == "order":
        if not args.graph:
            raise GraphFormatError("check order needs --graph")
        G = parse_graph(_read(args.graph))
        _, dgn = greedy_degeneracy_ordering(G)
        lo = next(c for c in range(G.n + 1) if degeneracy_le(G, c))
        agree = dgn == lo
        print(f"greedy = {dgn}  threshold = {lo}  agree = {str(agree).lower()}")
        return 0 if agree else 3
    # bconn: exact count vs the decision procedure on every k up to r+1
    if not args.graph:
        raise GraphFormatError("check bconn needs --graph")
    G = parse_graph(_read(args.graph))
    if G.n > 12:
        print(f"oracle skipped: n = {G.n} exceeds cap 12", file=sys.stderr)
        return 2
    rng = random.Random(args.seed)
    cfg = BconnConfig(mode="exact", trials=args.trials, seed=args.seed)
    for trial in range(args.trials or 50):
        S = sorted(rng.sample(range(G.n), rng.randint(1, min(5, G.n))))
        u = rng.choice(S)
        r = rng.randint(1, max(1, args.r))
        exact = bconn_exact(G, S, u, r)
        for k in range(1, exact + 2):
            if bconn_at_least(G, S, u, r, k, cfg) != (exact >= k):
                print(f"oracle mismatch: S={S} u={u} r={r} k={k} "
                      f"exact={exact}", file=sys.stderr)
                return 3
    print("bconn agree = true")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="bexpkit", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--r", type=int, default=1, help="radius parameter")
    common.add_argument("--d", type=int, default=2,
                        help="degeneracy / density parameter")
    common.add_argument("--p", type=int, default=2,
                        help="treedepth-coloring class count")
    common.add_argument("--delta", type=int, default=None,
                        help="maximum degree (bnddeg coloring)")
    common.add_argument("--seed", type=int, default=0,
                        help="master seed for randomized modes")
    common.add_argument("--trials", type=int, default=None,
                        help="Monte-Carlo trial count")
    common.add_argument("--bconn-mode", choices=("exact", "mc"),
                        default="exact", help="back-connectivity backend")
    common.add_argument("--ledger", action="store_true",
                        help="print per-phase round counts")
    common.add_argument("--oracle", action="store_true",
                        help="cross-check against a brute-force oracle "
                             "(size-guarded)")

    sub = top.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("order", parents=[common],
                       help="vertex and block orderings")
    p.add_argument("kind", choices=("greedy", "block", "adm", "wcol"))
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=_cmd_order)

    p = sub.add_parser("color", parents=[common], help="proper colorings")
    p.add_argument("kind", choices=("bnddeg", "degenerate", "ltd"))
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=_cmd_color)

    p = sub.add_parser("forest", parents=[common],
                       help="bounded-depth DFS forest")
    p.add_argument("--graph", required=True)
    p.add_argument("--h", type=int, required=True,
                   help="promised treedepth bound")
    p.set_defaults(fn=_cmd_forest)

    p = sub.add_parser("mc", parents=[common], help="model checking")
    p.add_argument("--structure", required=True)
    p.add_argument("--formula", required=True)
    p.set_defaults(fn=_cmd_mc)

    p = sub.add_parser("domset", parents=[common],
                       help="distance-r dominating set")
    p.add_argument("--graph", required=True)
    p.set_defaults(fn=_cmd_domset)

    p = sub.add_parser("reduce-circuit", parents=[common],
                       help="circuit value via the degeneracy-2 reduction")
    p.add_argument("--circuit", required=True)
    p.set_defaults(fn=_cmd_reduce_circuit)

    p = sub.add_parser("check", parents=[common],
                       help="oracle comparisons")
    p.add_argument("what", choices=("mc", "order", "bconn"))
    p.add_argument("--graph")
    p.add_argument("--structure")
    p.add_argument("--formula")
    p.set_defaults(fn=_cmd_check)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (GraphFormatError, FormulaParseError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except (PromiseViolation, OracleOverflow, ReductionOverflow) as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
