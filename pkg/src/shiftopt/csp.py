"""Weighted constraint satisfaction by dynamic programming over tree decompositions.

Hard constraints are relations over a scope (an explicit tuple table, or a
predicate for relations too large to tabulate). Soft constraints map scoped
tuples to integer weights. :func:`csp_solve` finds a minimum-weight feasible
assignment in time exponential only in the decomposition width.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import CapExceeded, InvalidDecomposition
from .graph import Graph
from .treedec import NiceDecomposition, NodeKind, TreeDecomposition, make_nice, min_fill_decomposition

CSP_BRUTE_CAP = 10**7


@dataclass(frozen=True)
class HardConstraint:
    scope: tuple[int, ...]
    relation: frozenset | Callable[[tuple[int, ...]], bool]

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        if not callable(self.relation):
            object.__setattr__(self, "relation", frozenset(tuple(t) for t in self.relation))

    def admits(self, values: tuple[int, ...]) -> bool:
        if callable(self.relation):
            return bool(self.relation(values))
        return values in self.relation


@dataclass(frozen=True)
class SoftConstraint:
    """Weight table over ``scope``; tuples missing from a mapping weigh 0."""

    scope: tuple[int, ...]
    weights: Mapping[tuple[int, ...], int] | Callable[[tuple[int, ...]], int]

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))

    def weight(self, values: tuple[int, ...]) -> int:
        if callable(self.weights):
            return int(self.weights(values))
        return self.weights.get(values, 0)


@dataclass
class CspInstance:
    domains: list[tuple[int, ...]]
    hard: list[HardConstraint] = field(default_factory=list)
    soft: list[SoftConstraint] = field(default_factory=list)

    def __post_init__(self):
        self.domains = [tuple(sorted(set(d))) for d in self.domains]
        n = len(self.domains)
        for con in [*self.hard, *self.soft]:
            if any(not 0 <= v < n for v in con.scope):
                raise ValueError(f"constraint scope {con.scope} outside 0..{n - 1}")
            if len(set(con.scope)) != len(con.scope):
                raise ValueError(f"constraint scope {con.scope} repeats a variable")
        for con in self.hard:
            if not callable(con.relation):
                for tup in con.relation:
                    if len(tup) != len(con.scope) or any(
                            x not in self.domains[v] for x, v in zip(tup, con.scope)):
                        raise ValueError(f"tuple {tup} does not fit scope {con.scope}")

    @property
    def num_vars(self) -> int:
        return len(self.domains)

    def constraint_graph(self) -> Graph:
        edges = set()
        for con in [*self.hard, *self.soft]:
            for a, b in itertools.combinations(sorted(con.scope), 2):
                edges.add((a, b))
        return Graph(self.num_vars, edges)

    def satisfies(self, z: Sequence[int]) -> bool:
        return all(z[v] in dom for v, dom in enumerate(self.domains)) and all(
            con.admits(tuple(z[v] for v in con.scope)) for con in self.hard)

    def weight(self, z: Sequence[int]) -> int:
        return sum(con.weight(tuple(z[v] for v in con.scope)) for con in self.soft)


@dataclass(frozen=True)
class CspSolution:
    assignment: tuple[int, ...]
    weight: int


def csp_brute(inst: CspInstance, cap: int = CSP_BRUTE_CAP) -> CspSolution | None:
    """Exhaustive minimum; ties go to the lexicographically smallest assignment."""
    size = math.prod(len(d) for d in inst.domains)
    if size > cap:
        raise CapExceeded(f"{size} assignments exceed cap {cap}")
    best = None
    for z in itertools.product(*inst.domains):
        if not inst.satisfies(z):
            continue
        w = inst.weight(z)
        if best is None or w < best.weight:
            best = CspSolution(z, w)
    return best


class _Dp:
    """Bottom-up tables over a nice decomposition with argmin links for traceback."""

    def __init__(self, inst: CspInstance, nice: NiceDecomposition):
        self.inst = inst
        self.nice = nice
        nodes = nice.nodes
        par = nice.parents()
        depth = [0] * len(nodes)
        for t in range(len(nodes) - 1, -1, -1):
            if par[t] is not None:
                depth[t] = depth[par[t]] + 1
        # hard constraints are checked where the introduced vertex completes them
        self.intro_checks: dict[int, list[HardConstraint]] = {}
        self.root_checks: list[HardConstraint] = []
        for con in inst.hard:
            if not con.scope:
                self.root_checks.append(con)
        for t, nd in enumerate(nodes):
            if nd.kind is NodeKind.INTRODUCE:
                bag = set(nd.bag)
                self.intro_checks[t] = [con for con in inst.hard
                                        if nd.vertex in con.scope and bag.issuperset(con.scope)]
        # soft constraints are charged once, at the highest node holding the scope
        self.charges: dict[int, list[SoftConstraint]] = {}
        for con in inst.soft:
            holders = [t for t, nd in enumerate(nodes) if set(nd.bag).issuperset(con.scope)]
            if not holders:
                raise InvalidDecomposition(f"no bag contains soft scope {con.scope}")
            top = min(holders, key=lambda t: (depth[t], t))
            self.charges.setdefault(top, []).append(con)
        for con in inst.hard:
            if con.scope and not any(set(nd.bag).issuperset(con.scope) for nd in nodes):
                raise InvalidDecomposition(f"no bag contains hard scope {con.scope}")

    def run(self, fixed: Mapping[int, int]):
        inst = self.inst
        tables: list[dict] = []
        links: list[dict] = []
        for t, nd in enumerate(self.nice.nodes):
            table: dict[tuple, int] = {}
            link: dict[tuple, tuple] = {}
            if nd.kind is NodeKind.LEAF:
                table[()] = 0
            elif nd.kind is NodeKind.INTRODUCE:
                pos = nd.bag.index(nd.vertex)
                values = (fixed[nd.vertex],) if nd.vertex in fixed else inst.domains[nd.vertex]
                checks = [(con, [nd.bag.index(v) for v in con.scope]) for con in self.intro_checks[t]]
                for state, cost in tables[nd.children[0]].items():
                    for x in values:
                        new = state[:pos] + (x,) + state[pos:]
                        if all(con.admits(tuple(new[p] for p in idx)) for con, idx in checks):
                            table[new] = cost
            elif nd.kind is NodeKind.FORGET:
                child = self.nice.nodes[nd.children[0]]
                pos = child.bag.index(nd.vertex)
                for state, cost in tables[nd.children[0]].items():
                    key = state[:pos] + state[pos + 1:]
                    if key not in table or cost < table[key] or (cost == table[key] and state < link[key]):
                        table[key] = cost
                        link[key] = state
            else:
                left, right = (tables[c] for c in nd.children)
                for state, cost in left.items():
                    other = right.get(state)
                    if other is not None:
                        table[state] = cost + other
            for con in self.charges.get(t, ()):
                idx = [nd.bag.index(v) for v in con.scope]
                for state in table:
                    table[state] += con.weight(tuple(state[p] for p in idx))
            tables.append(table)
            links.append(link)
            for ch in nd.children:
                tables[ch] = None
        root_table = tables[-1]
        if () not in root_table:
            return None
        if not all(con.admits(()) for con in self.root_checks):
            return None
        # traceback
        z = [None] * inst.num_vars
        stack = [(len(self.nice.nodes) - 1, ())]
        while stack:
            t, state = stack.pop()
            nd = self.nice.nodes[t]
            for v, x in zip(nd.bag, state):
                z[v] = x
            if nd.kind is NodeKind.INTRODUCE:
                pos = nd.bag.index(nd.vertex)
                stack.append((nd.children[0], state[:pos] + state[pos + 1:]))
            elif nd.kind is NodeKind.FORGET:
                stack.append((nd.children[0], links[t][state]))
            elif nd.kind is NodeKind.JOIN:
                for ch in nd.children:
                    stack.append((ch, state))
        return CspSolution(tuple(z), root_table[()])


def csp_solve(inst: CspInstance, td: TreeDecomposition | None = None,
              prefer: str = "min") -> CspSolution | None:
    """Minimum-weight feasible assignment, or ``None`` when infeasible.

    ``td`` must be a decomposition of the constraint graph; by default a
    min-fill decomposition is built. Among optimal assignments the
    lexicographically smallest is returned (``prefer="max"``: largest).
    """
    if prefer not in ("min", "max"):
        raise ValueError("prefer must be 'min' or 'max'")
    if any(not d for d in inst.domains):
        raise ValueError("every variable needs a nonempty domain")
    g = inst.constraint_graph()
    if td is None:
        td = min_fill_decomposition(g)
    nice = make_nice(td, g)
    dp = _Dp(inst, nice)
    best = dp.run({})
    if best is None:
        return None
    target = best.weight
    fixed: dict[int, int] = {}
    for v in range(inst.num_vars):
        current = best.assignment[v]
        dom = inst.domains[v]
        better = [x for x in dom if (x < current if prefer == "min" else x > current)]
        if prefer == "max":
            better.reverse()
        for x in better:
            trial = dp.run({**fixed, v: x})
            if trial is not None and trial.weight == target:
                best = trial
                break
        fixed[v] = best.assignment[v]
    return best
