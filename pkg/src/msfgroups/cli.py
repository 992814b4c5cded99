"""``msfgroups`` command-line interface.

Exit status: 0 on success, 1 when a verification suite reports a failed
check, 2 on usage errors (bad group strings, caps exceeded, malformed files).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Sequence

from . import __version__
from .census import Config, census, render
from .errors import CapExceeded, GroupSpecError, PreconditionError
from .group_core import GroupSpec, classify, format_group_spec, mu, parse_group_spec
from .linkgraph import build_link_graph, even_coset, odd_coset
from .mis_engine import check_bounds, enumerate_mis, format_edge_list, parse_edge_list, to_dot
from .sumfree import ElementSet, count_sumfree, enumerate_maximal_sumfree
from . import verify as V

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _group(text: str) -> GroupSpec:
    try:
        return parse_group_spec(text)
    except GroupSpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_elements(G: GroupSpec, text: str) -> ElementSet:
    """``"1,4"`` for cyclic groups, ``"(0,1) (1,2)"`` in general."""
    text = text.strip()
    if not text:
        return ElementSet.empty(G)
    try:
        if "(" in text:
            tuples = re.findall(r"\(([^()]*)\)", text)
            rest = re.sub(r"\(([^()]*)\)", "", text)
            if rest.strip(" ,;"):
                raise ValueError(f"unexpected text {rest.strip()!r}")
            elems = [tuple(int(x) for x in t.split(",")) for t in tuples]
        else:
            elems = [int(x) for x in re.split(r"[,\s;]+", text) if x]
        return ElementSet.from_elements(G, elems)
    except ValueError as exc:
        raise UsageError(f"cannot parse elements {text!r} in {format_group_spec(G)}: {exc}") from None


def _emit(obj, fmt: str) -> None:
    if fmt == "json":
        json.dump(obj, sys.stdout, indent=2)
        sys.stdout.write("\n")
    elif fmt == "csv" and isinstance(obj, dict):
        keys = [k for k, v in obj.items() if not isinstance(v, (list, dict))]
        print(",".join(keys))
        print(",".join(str(obj[k]) for k in keys))
    else:
        print(obj)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args, cfg: Config) -> int:
    G = args.group
    t = classify(G)
    _emit({"group": format_group_spec(G), "n": G.n, "type": str(t), "exponent": G.exponent}
          if args.format != "text" else str(t), args.format)
    return EXIT_OK


def cmd_mu(args, cfg: Config) -> int:
    G = args.group
    m = mu(G)
    _emit({"group": format_group_spec(G), "n": G.n, "mu": m} if args.format != "text" else m, args.format)
    return EXIT_OK


def cmd_msf(args, cfg: Config) -> int:
    G = args.group
    cap = args.cap if args.cap is not None else cfg.fmax_cap
    rep = enumerate_maximal_sumfree(G, want_witnesses=args.list, cap=cap)
    out = {"group": format_group_spec(G), "n": G.n, "fmax": rep.count}
    if args.count_all:
        out["f"] = count_sumfree(G, cap=args.cap if args.cap is not None else cfg.count_cap)
    sets = [str(w) for w in rep.witnesses] if args.list else []
    if args.format == "json":
        if args.list:
            out["sets"] = sets
        _emit(out, "json")
    elif args.format == "csv" and args.list:
        print("set")
        for s in sets:
            print(f'"{s}"')
    elif args.list:
        print("\n".join(sets))
    else:
        _emit(out if args.format == "csv" else "\n".join(f"{k} = {v}" for k, v in out.items() if k in ("fmax", "f")), args.format)
    return EXIT_OK


def _read_graph(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_edge_list(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_mis(args, cfg: Config) -> int:
    g = _read_graph(args.file)
    cap = args.cap if args.cap is not None else cfg.mis_cap
    if args.dot:
        sys.stdout.write(to_dot(g))
        return EXIT_OK
    if not args.bounds:
        count = enumerate_mis(g, cap=cap)
        _emit({"n": g.n, "edges": g.num_edges, "loops": g.num_loops, "mis": count}
              if args.format != "text" else count, args.format)
        return EXIT_OK
    rep = check_bounds(g, cap=cap)
    if args.format == "json":
        _emit({
            "n": g.n, "mis": rep.count, "log2_mis": rep.exact_log2, "holds": rep.holds,
            "bounds": [asdict(e) for e in rep.entries],
        }, "json")
    else:
        print(f"mis = {rep.count}  (log2 = {rep.exact_log2:.6f})")
        for e in rep.entries:
            if e.applicable:
                mark = "ok" if e.value_log2 + 1e-9 >= rep.exact_log2 else "VIOLATED"
                print(f"  {e.name:<15} log2 bound = {e.value_log2:.6f}  {mark}")
            else:
                print(f"  {e.name:<15} n/a ({e.note})")
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_link(args, cfg: Config) -> int:
    G = args.group
    S = parse_elements(G, args.S)
    if args.B in ("odd", "even"):
        try:
            B = odd_coset(G) if args.B == "odd" else even_coset(G)
        except (ValueError, PreconditionError) as exc:
            raise UsageError(str(exc)) from None
    else:
        B = parse_elements(G, args.B)
    L = build_link_graph(G, S, B)
    if args.dot:
        sys.stdout.write(L.to_dot())
        return EXIT_OK
    if args.edges:
        sys.stdout.write(format_edge_list(L.graph))
        return EXIT_OK
    cap = args.cap if args.cap is not None else cfg.mis_cap
    info = {
        "group": format_group_spec(G), "S": str(S), "B": str(B),
        "vertices": L.order, "edges": L.num_edges, "type1": L.e1, "type2": L.e2,
        "loops": L.graph.num_loops, "min_degree": L.min_degree, "max_degree": L.max_degree,
    }
    if L.order <= cap:
        info["mis"] = L.mis(cap=cap)
    if args.format == "text":
        for k, v in info.items():
            print(f"{k}: {v}")
    else:
        _emit(info, args.format)
    return EXIT_OK


def cmd_census(args, cfg: Config) -> int:
    if args.orders:
        orders = args.orders
    elif args.min is not None and args.max is not None:
        orders = list(range(args.min, args.max + 1))
    else:
        raise UsageError("census needs explicit orders or both --min and --max")
    if any(n < 1 for n in orders):
        raise UsageError("orders must be positive")
    if args.cap is not None:
        cfg.fmax_cap = args.cap
    rows = census(orders, fmax_cap=cfg.fmax_cap, jobs=cfg.jobs)
    text = render(rows, "json" if args.format == "json" else "csv", cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_suite(args, cfg: Config) -> V.VerificationRecord:
    seed = cfg.seed
    match args.suite:
        case "prop14":
            if args.target is None:
                raise UsageError("verify prop14 needs a group, e.g. Z9")
            G = _group(args.target)
            return V.verify_prop14(G, cap=args.cap if args.cap is not None else 45)
        case "prop31":
            if args.target is None:
                raise UsageError("verify prop31 needs n (and optionally --eps)")
            try:
                n = int(args.target)
                eps = Fraction(args.eps)
            except ValueError:
                raise UsageError("prop31 expects an integer n and a rational --eps") from None
            if n < 1 or not 0 < eps < 1:
                raise UsageError("prop31 needs n >= 1 and 0 < eps < 1")
            return V.verify_prop31(n, eps)
        case "claims3":
            return V.verify_claims3(instances=args.instances, nmax=args.nmax or 64, seed=seed)
        case "section4":
            return V.verify_section4(tmax=args.tmax, seed=seed)
        case "bounds":
            return V.verify_bounds(graphs=args.instances, nmax=args.nmax or 12, seed=seed)
        case "partitions":
            return V.verify_partitions(nmax=args.nmax or 200)
    raise UsageError(f"unknown suite {args.suite!r}")


def cmd_verify(args, cfg: Config) -> int:
    try:
        rec = _run_suite(args, cfg)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    verdict = "PASS" if rec.passed else "FAIL"
    if args.format == "json":
        _emit({"suite": rec.suite, "params": rec.params, "seed": cfg.seed, "passed": rec.passed,
               "checks": [asdict(c) for c in rec.checks]}, "json")
    elif args.format == "csv":
        print("check,passed,detail")
        for c in rec.checks:
            detail = c.detail.replace('"', "'")
            print(f'"{c.name}",{str(c.passed).lower()},"{detail}"')
    else:
        shown = rec.checks if args.verbose else rec.failures
        for c in shown:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else ""))
        print(verdict if rec.passed else f"{verdict} ({len(rec.failures)} of {len(rec.checks)} checks failed)")
    return EXIT_OK if rec.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("text", "csv", "json"), default=d if suppress else "text")
    p.add_argument("--jobs", type=int, default=d, metavar="N")
    p.add_argument("--cap", type=int, default=d, metavar="N")
    p.add_argument("--seed", type=int, default=d, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)

    p = argparse.ArgumentParser(prog="msfgroups", description="Maximal sum-free sets in finite abelian groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("classify", parents=[common], help="group type I(p), II or III(m)")
    s.add_argument("group", type=_group)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("mu", parents=[common], help="largest sum-free set size")
    s.add_argument("group", type=_group)
    s.set_defaults(func=cmd_mu)

    s = sub.add_parser("msf", parents=[common], help="count or list maximal sum-free sets")
    s.add_argument("group", type=_group)
    s.add_argument("--list", action="store_true", help="print every maximal sum-free set")
    s.add_argument("--count-all", action="store_true", help="also count all sum-free sets")
    s.set_defaults(func=cmd_msf)

    s = sub.add_parser("mis", parents=[common], help="count maximal independent sets of an edge-list graph")
    s.add_argument("file", help="edge-list file, or - for stdin")
    s.add_argument("--bounds", action="store_true", help="compare against the upper bounds")
    s.add_argument("--dot", action="store_true", help="export Graphviz DOT instead of counting")
    s.set_defaults(func=cmd_mis)

    s = sub.add_parser("link", parents=[common], help="build the link graph L_S[B]")
    s.add_argument("group", type=_group)
    s.add_argument("--S", required=True, help='generators, e.g. "2" or "(0,1) (1,0)"')
    s.add_argument("--B", default="odd", help='vertex set: "odd", "even" or an element list')
    out = s.add_mutually_exclusive_group()
    out.add_argument("--dot", action="store_true")
    out.add_argument("--edges", action="store_true", help="edge-list export")
    s.set_defaults(func=cmd_link)

    s = sub.add_parser("census", parents=[common], help="f_max census over all groups of given orders")
    s.add_argument("orders", nargs="*", type=int)
    s.add_argument("--min", type=int)
    s.add_argument("--max", type=int)
    s.add_argument("--out", help="write the report here instead of stdout")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    s.add_argument("suite", choices=("prop14", "prop31", "claims3", "section4", "bounds", "partitions"))
    s.add_argument("target", nargs="?", help="group (prop14) or order n (prop31)")
    s.add_argument("--eps", default="0.01")
    s.add_argument("--instances", type=int, default=100)
    s.add_argument("--nmax", type=int)
    s.add_argument("--tmax", type=int, default=6)
    s.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.resolve(jobs=args.jobs, seed=args.seed)
    except ValueError as exc:
        print(f"msfgroups: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, cfg)
    except (UsageError, CapExceeded, GroupSpecError) as exc:
        print(f"msfgroups {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
