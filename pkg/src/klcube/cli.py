"""
Command line front end.

    klcube kl 0213 2301
    klcube partial 0213 2301
    klcube interval 0213 2301 --dot --highlight-L
    klcube decomps 0213 2301
    klcube decomps --fixture crown5.json
    klcube verify --n 5 --mode conjecture --deterministic --out s5.jsonl

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .decomp import DecompositionFailure, canonical_L, enumerate_decompositions, validate
from .formula import FormulaKL
from .graph import RankedDigraph, build_interval, digraph_from_json, interval_to_json, to_dot
from .klbase import KLCacheError, KLTable
from .perm import Permutation, all_permutations, bruhat_leq, length
from .poly import partial_transform
from .sweep import JOBS_ENV, SweepSummary, default_jobs, sweep, write_jsonl


class UsageError(Exception):
    pass


def _perm(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _pair(args) -> tuple[Permutation, Permutation]:
    x, y = _perm(args.x), _perm(args.y)
    if len(x) != len(y):
        raise UsageError(f"{x} and {y} have different window sizes")
    return x, y


def _load_table(path: Optional[str], size: int) -> KLTable:
    if path and os.path.exists(path):
        try:
            return KLTable.load(path, size=size)
        except (OSError, KLCacheError) as exc:
            raise UsageError(f"cannot use KL cache: {exc}") from None
    return KLTable(size)


def _save_table(table: KLTable, path: Optional[str]) -> None:
    if path:
        table.save(path)


# -- subcommands ----------------------------------------------------------------------


def cmd_kl(args) -> int:
    x, y = _pair(args)
    if args.method == "formula":
        p = FormulaKL(len(x)).kl(x, y)
    else:
        table = _load_table(args.kl_cache, len(x))
        p = table.kl(x, y)
        _save_table(table, args.kl_cache)
    dp = partial_transform(p, length(y) - length(x)) if p else None
    if args.json:
        out = {"x": str(x), "y": str(y), "P": p.to_list(), "dP": dp.to_list() if dp is not None else None}
        print(json.dumps(out))
    else:
        print(f"P = {p}")
        if dp is not None:
            print(f"dP = {dp}")
    return 0


def cmd_partial(args) -> int:
    x, y = _pair(args)
    if not bruhat_leq(x, y):
        raise UsageError(f"{x} is not below {y}")
    table = _load_table(args.kl_cache, len(x))
    dp = table.partial_kl(x, y)
    _save_table(table, args.kl_cache)
    if args.json:
        print(json.dumps({"x": str(x), "y": str(y), "dP": dp.to_list()}))
    else:
        print(f"dP = {dp}")
    return 0


def cmd_interval(args) -> int:
    x, y = _pair(args)
    if not bruhat_leq(x, y):
        raise UsageError(f"{x} is not below {y}")
    g = build_interval(x, y)
    members, hyper = (), ()
    if args.highlight_L and len(g) > 1:
        D = canonical_L(g)
        members = D.members
        hyper = [(u, v) for v, srcs in D.hypercube_edges.items() for u in srcs]
    if args.json:
        data = interval_to_json(g)
        if args.highlight_L:
            data["L"] = sorted(members)
        print(json.dumps(data))
    else:
        sys.stdout.write(to_dot(g, members, hyper))
    print(f"[{x}, {y}]: {len(g)} vertices, {g.n_edges} edges", file=sys.stderr)
    return 0


def _decomp_graph(args) -> RankedDigraph:
    if args.fixture:
        if args.x or args.y:
            raise UsageError("give either x y or --fixture, not both")
        try:
            with open(args.fixture, encoding="utf-8") as fh:
                return digraph_from_json(fh.read())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read fixture: {exc}") from None
    if not (args.x and args.y):
        raise UsageError("decomps needs x y or --fixture")
    x, y = _pair(args)
    if x == y:
        raise UsageError("x = y: a single vertex admits no decomposition")
    if not bruhat_leq(x, y):
        raise UsageError(f"{x} is not below {y}")
    return build_interval(x, y)


def _name(g: RankedDigraph, v: int) -> str:
    return str(g.labels[v])


def cmd_decomps(args) -> int:
    g = _decomp_graph(args)
    if len(g) < 2:
        raise UsageError("a single vertex admits no decomposition")
    if g.top is None or g.bottom is None:
        raise UsageError("graph needs a unique top and bottom vertex")
    found = enumerate_decompositions(g)
    valid = {D.z for D in found}
    lines = []
    for z in range(len(g)):
        if z == g.top:
            continue
        if z in valid:
            D = next(d for d in found if d.z == z)
            entry = {"z": _name(g, z), "valid": True, **{k: v for k, v in D.to_json().items() if k != "z"}}
        else:
            try:
                validate(g, z)
                raise AssertionError("enumeration missed a valid decomposition")
            except DecompositionFailure as exc:
                entry = {"z": _name(g, z), "valid": False, "failure": exc.to_json()}
        lines.append(entry)
    if args.json:
        for entry in lines:
            print(json.dumps(entry))
    elif args.all:
        for entry in lines:
            if entry["valid"]:
                print(f"z = {entry['z']}: valid, |J| = {len(entry['members'])}")
            else:
                f = entry["failure"]
                print(f"z = {entry['z']}: not a decomposition ({f['kind']} witness {f['witness']})")
    else:
        for entry in lines:
            if entry["valid"]:
                print(f"z = {entry['z']}: |J| = {len(entry['members'])}")
    word = "decomposition" if len(found) == 1 else "decompositions"
    print(f"{len(found)} {word}", file=sys.stdout if not args.json else sys.stderr)
    return 0


def cmd_verify(args) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.sample is not None and args.sample < 1:
        raise UsageError("--sample must be positive")
    table = None
    if args.kl_cache:
        table = _load_table(args.kl_cache, args.n)
        if not os.path.exists(args.kl_cache):
            # fill the whole group once so forked workers share it
            for y in all_permutations(args.n):
                table.column(y)
            _save_table(table, args.kl_cache)
    items = sweep(
        args.n,
        mode=args.mode,
        sample=args.sample,
        seed=args.seed,
        workers=args.jobs,
        dedup=args.dedup,
        table=table,
        deterministic=args.deterministic,
    )
    if args.out in (None, "-"):
        summary = write_jsonl(items, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            summary = write_jsonl(items, fh)
    assert isinstance(summary, SweepSummary)
    print(summary.human(), file=sys.stderr)
    return 0 if summary.ok else 1


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="klcube",
        description="Kazhdan-Lusztig polynomials of symmetric groups via hypercube decompositions.",
    )
    p.add_argument("--kl-cache", metavar="PATH", help="on-disk KL table: read if present, written otherwise")
    sub = p.add_subparsers(dest="command", required=True)

    def pair(sp, required=True):
        nargs = None if required else "?"
        sp.add_argument("x", nargs=nargs, help="lower permutation, e.g. 0213")
        sp.add_argument("y", nargs=nargs, help="upper permutation, e.g. 2301")

    sp = sub.add_parser("kl", help="print P_{x,y} and its q-derivative")
    pair(sp)
    sp.add_argument("--method", choices=("classical", "formula"), default="classical")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_kl)

    sp = sub.add_parser("partial", help="print the q-derivative of P_{x,y}")
    pair(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_partial)

    sp = sub.add_parser("interval", help="export the Bruhat interval [x, y]")
    pair(sp)
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="Graphviz output (default)")
    fmt.add_argument("--json", action="store_true")
    sp.add_argument("--highlight-L", action="store_true", help="mark the coset decomposition")
    sp.set_defaults(func=cmd_interval)

    sp = sub.add_parser("decomps", help="list the hypercube decompositions of an interval")
    pair(sp, required=False)
    sp.add_argument("--fixture", metavar="FILE", help='JSON graph {"levels": [...], "edges": [[s, t], ...]}')
    sp.add_argument("--all", action="store_true", help="also list rejected z with a witness")
    sp.add_argument("--json", action="store_true", help="one JSON object per candidate z")
    sp.set_defaults(func=cmd_decomps)

    sp = sub.add_parser("verify", help="check dP = I + Q over a symmetric group")
    sp.add_argument("--n", type=int, required=True, help="window size (the group is S_n)")
    sp.add_argument("--mode", choices=("theorem", "conjecture"), default="theorem")
    sp.add_argument("--sample", type=int, help="number of records to draw instead of a full sweep")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=None, help=f"worker processes (default: ${JOBS_ENV} or CPU count)")
    sp.add_argument("--out", metavar="FILE", help="JSONL output (default stdout)")
    sp.add_argument("--deterministic", action="store_true", help="omit timestamp and timing from the summary")
    sp.add_argument("--dedup", action="store_true", help="skip intervals isomorphic to one already checked")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "jobs", None) is None and args.command == "verify":
        try:
            args.jobs = default_jobs()
        except ValueError as exc:
            print(f"klcube: error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"klcube: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
