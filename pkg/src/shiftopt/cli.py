"""Command line front end; every command prints one JSON document.

Exit codes: 0 solved (the document may say "infeasible"), 2 usage error,
3 input parse or validation error, 4 overflow or internal assertion.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import Sequence

from .catalog import Predicate
from .errors import ArithmeticOverflow, ShiftOptError
from .explicit import SOLVERS, ExplicitInstance, Status, brute_force_tuples, f_eval
from .graph import Graph
from .pipeline import ab_coloring, chromatic_number, domatic_number, partition_solve
from .reductions import MscInstance, WsmInstance, WsmSet, domset_to_sco, msc_to_sco, solve_wsm
from .shift import CostMatrix

log = logging.getLogger("shiftopt")

COLUMN_LIMIT = 1000
PREDICATES = {p.value: p for p in Predicate}


class InputError(Exception):
    pass


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    return doc


def _field(doc: dict, key: str, path: str):
    if key not in doc:
        raise InputError(f"{path}: missing field {key!r}")
    return doc[key]


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{what} must be an integer")
    return v


def read_graph(path: str) -> Graph:
    doc = _load(path)
    n = _int(_field(doc, "n", path), "n")
    edges = _field(doc, "edges", path)
    try:
        return Graph(n, [(_int(u, "vertex"), _int(v, "vertex")) for u, v in edges])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_explicit(path: str) -> ExplicitInstance:
    doc = _load(path)
    n, r = _int(_field(doc, "n", path), "n"), _int(_field(doc, "r", path), "r")
    S, c = _field(doc, "S", path), _field(doc, "c", path)
    try:
        S = [tuple(_int(v, "S entry") for v in s) for s in S]
        rows = [tuple(_int(v, "c entry") for v in row) for row in c]
        if any(len(s) != n for s in S):
            raise ValueError("every vector in S needs n entries")
        if len(rows) != n or any(len(row) != r for row in rows):
            raise ValueError("c must have n rows of r entries")
        return ExplicitInstance(tuple(S), CostMatrix.from_rows(rows))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_msc(path: str) -> MscInstance:
    doc = _load(path)
    try:
        return MscInstance(_int(_field(doc, "n", path), "n"), _int(_field(doc, "r", path), "r"),
                           [set(d) for d in _field(doc, "demands", path)],
                           [set(f) for f in _field(doc, "family", path)])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_wsm(path: str) -> WsmInstance:
    doc = _load(path)
    try:
        sets = [WsmSet(set(s["members"]), tuple(s["cum_weights"])) for s in _field(doc, "sets", path)]
        return WsmInstance(_int(_field(doc, "k", path), "k"), tuple(_field(doc, "demands", path)), tuple(sets))
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def explicit_doc(inst: ExplicitInstance) -> dict:
    return {"n": inst.n, "r": inst.r, "S": [list(s) for s in inst.S],
            "c": [list(row) for row in inst.c.materialize().rows]}


def result_doc(inst: ExplicitInstance, res) -> dict:
    doc = {"status": res.status.value}
    if res.status is Status.OPTIMAL:
        doc["objective"] = res.objective
        doc["composition"] = list(res.witness.parts)
        if inst.r <= COLUMN_LIMIT:
            doc["columns"] = [list(col) for col in inst.materialize(res.witness).columns]
    return doc


def canonical_parts(parts) -> list[list[int]]:
    return sorted(sorted(p) for p in parts)


def random_instance(rng: random.Random, max_n=4, max_m=4, max_r=3, lo=-5, hi=5) -> ExplicitInstance:
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    r = rng.randint(1, max_r)
    S = set()
    while len(S) < m:
        S.add(tuple(rng.randint(0, 2) for _ in range(n)))
        if len(S) >= 3**n:
            break
    rows = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(n)]
    return ExplicitInstance(tuple(sorted(S)), CostMatrix.from_rows(rows))


def _verify_one(inst: ExplicitInstance, algo: str) -> dict:
    res = SOLVERS[algo](inst)
    oracle = brute_force_tuples(inst)
    agree = res.objective == oracle.objective and f_eval(inst, res.witness) == res.objective
    return {"agree": agree, "solver": result_doc(inst, res), "oracle": result_doc(inst, oracle)}


def cmd_solve_explicit(args) -> dict:
    inst = read_explicit(args.instance)
    return result_doc(inst, SOLVERS[args.algo](inst))


def cmd_solve_partition(args) -> dict:
    g = read_graph(args.graph)
    parts = partition_solve(PREDICATES[args.predicate], g, args.parts)
    if parts is None:
        return {"status": "infeasible"}
    return {"status": "optimal", "objective": g.n, "parts": canonical_parts(parts)}


def cmd_chromatic(args) -> dict:
    return {"status": "optimal", "objective": chromatic_number(read_graph(args.graph))}


def cmd_domatic(args) -> dict:
    return {"status": "optimal", "objective": domatic_number(read_graph(args.graph))}


def cmd_ab_color(args) -> dict:
    g = read_graph(args.graph)
    if not 1 <= args.b <= args.a:
        raise InputError("need 1 <= b <= a")
    colors = ab_coloring(g, args.a, args.b)
    if colors is None:
        return {"status": "infeasible"}
    classes = [[v for v in g.vertices if j in colors[v]] for j in range(args.a)]
    return {"status": "optimal", "objective": args.b * g.n,
            "colors": [sorted(cs) for cs in colors], "parts": canonical_parts(classes)}


def cmd_gen_domset(args) -> dict:
    if args.r < 1:
        raise InputError("r must be positive")
    return explicit_doc(domset_to_sco(read_graph(args.graph), args.r))


def cmd_gen_msc(args) -> dict:
    return explicit_doc(msc_to_sco(read_msc(args.instance)))


def cmd_solve_wsm(args) -> dict:
    sol = solve_wsm(read_wsm(args.instance))
    if sol is None:
        return {"status": "infeasible"}
    return {"status": "optimal", "objective": sol.weight, "multiplicities": list(sol.multiplicities)}


def cmd_verify(args) -> dict:
    if args.instance:
        return _verify_one(read_explicit(args.instance), args.algo)
    seed = args.sub_seed if getattr(args, "sub_seed", None) is not None else args.seed
    rng = random.Random(seed)
    failures = []
    skipped = 0
    for idx in range(args.random):
        inst = random_instance(rng)
        try:
            ok = _verify_one(inst, args.algo)["agree"]
        except ShiftOptError:
            # the requested solver does not apply to this random instance
            skipped += 1
            continue
        if not ok:
            failures.append({"index": idx, "instance": explicit_doc(inst)})
    return {"instances": args.random, "agree": not failures, "failures": failures, "skipped": skipped}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftopt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized subcommands")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-explicit")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=sorted(SOLVERS), default="auto")
    p.set_defaults(func=cmd_solve_explicit)

    p = sub.add_parser("solve-partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--predicate", choices=sorted(PREDICATES), required=True)
    p.add_argument("--parts", type=int, required=True)
    p.set_defaults(func=cmd_solve_partition)

    for name, func in (("chromatic", cmd_chromatic), ("domatic", cmd_domatic)):
        p = sub.add_parser(name)
        p.add_argument("--graph", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("ab-color")
    p.add_argument("--graph", required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(func=cmd_ab_color)

    p = sub.add_parser("gen-domset")
    p.add_argument("--graph", required=True)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_gen_domset)

    p = sub.add_parser("gen-msc")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_gen_msc)

    p = sub.add_parser("solve-wsm")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_solve_wsm)

    p = sub.add_parser("verify")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--instance")
    group.add_argument("--random", type=int, metavar="N", help="check N random instances")
    p.add_argument("--algo", choices=sorted(SOLVERS), default="auto")
    p.add_argument("--seed", type=int, dest="sub_seed", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        doc = args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return 3
    except (ArithmeticOverflow, AssertionError) as exc:
        log.error("internal failure: %s", exc)
        return 4
    except ShiftOptError as exc:
        log.error("%s", exc)
        return 3
    out.write(json.dumps(doc, sort_keys=True) + "\n")
    return 0


def main() -> None:
    sys.exit(run())
