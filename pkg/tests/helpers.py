"""Independent oracles and random generators shared by the test modules."""
from __future__ import annotations

import itertools
import random

import networkx as nx

from shiftopt import CostMatrix, ExplicitInstance, Graph
from shiftopt.catalog import Predicate, predicate_check
from shiftopt.csp import CspInstance, HardConstraint, SoftConstraint
from shiftopt.ilp import IlpSystem


def random_rows(rng: random.Random, n: int, r: int, lo: int = -5, hi: int = 5, shape: str | None = None):
    rows = []
    for _ in range(n):
        row = [rng.randint(lo, hi) for _ in range(r)]
        if shape == "shifted":
            row.sort(reverse=True)
        elif shape == "anti":
            row.sort()
        rows.append(row)
    return rows


def random_explicit(rng: random.Random, n_max=6, m_max=5, r_max=4, lo=-5, hi=5, shape=None,
                    entry_lo=0, entry_hi=2) -> ExplicitInstance:
    n = rng.randint(1, n_max)
    r = rng.randint(1, r_max)
    m_target = rng.randint(1, m_max)
    S: list[tuple[int, ...]] = []
    universe = (entry_hi - entry_lo + 1) ** n
    while len(S) < min(m_target, universe):
        s = tuple(rng.randint(entry_lo, entry_hi) for _ in range(n))
        if s not in S:
            S.append(s)
    return ExplicitInstance(tuple(S), CostMatrix.from_rows(random_rows(rng, n, r, lo, hi, shape)))


def shift_rows_direct(rows):
    return [sorted(row, reverse=True) for row in rows]


def direct_objective(c_rows, columns) -> int:
    """Materialize the shift by sorting each row and take the inner product."""
    n = len(c_rows)
    rows = [[col[i] for col in columns] for i in range(n)]
    return sum(a * b for cr, xr in zip(c_rows, shift_rows_direct(rows)) for a, b in zip(cr, xr))


def brute_partition(p: Predicate, g: Graph, r: int):
    """Some labelling of the vertices by ``r`` labels whose classes all satisfy ``p``, or None."""
    for labels in itertools.product(range(r), repeat=g.n):
        parts = [[v for v in g.vertices if labels[v] == j] for j in range(r)]
        if all(predicate_check(p, g, part) for part in parts):
            return parts
    return None


def brute_chromatic(g: Graph) -> int:
    return next(r for r in range(1, g.n + 1) if brute_partition(Predicate.INDEPENDENT_SET, g, r))


def brute_domatic(g: Graph) -> int:
    return max(r for r in range(1, g.n + 1) if brute_partition(Predicate.DOMINATING_SET, g, r))


def brute_ab(g: Graph, a: int, b: int) -> bool:
    """Is there an assignment of ``b`` colours out of ``a`` per vertex with adjacent vertices disjoint?"""
    choices = list(itertools.combinations(range(a), b))
    adj = [sorted(g.neighbors(v)) for v in g.vertices]
    assign: list[set] = [set()] * g.n

    def go(v):
        if v == g.n:
            return True
        for ch in choices:
            s = set(ch)
            if all(u >= v or not (assign[u] & s) for u in adj[v]):
                assign[v] = s
                if go(v + 1):
                    return True
        return False

    return go(0)


def atlas_graphs(n_min=1, n_max=7):
    for G in nx.graph_atlas_g():
        if n_min <= G.number_of_nodes() <= n_max:
            yield Graph.from_networkx(G)


def random_csp(rng: random.Random, max_vars=8, max_dom=3, max_arity=3) -> CspInstance:
    n = rng.randint(1, max_vars)
    domains = [tuple(sorted(rng.sample(range(-1, 4), rng.randint(1, max_dom)))) for _ in range(n)]
    hard, soft = [], []
    for _ in range(rng.randint(0, n)):
        scope = tuple(rng.sample(range(n), rng.randint(1, min(max_arity, n))))
        tuples = list(itertools.product(*(domains[v] for v in scope)))
        keep = [t for t in tuples if rng.random() < 0.7]
        hard.append(HardConstraint(scope, keep))
    for _ in range(rng.randint(0, n + 2)):
        scope = tuple(rng.sample(range(n), rng.randint(1, min(max_arity, n))))
        tuples = itertools.product(*(domains[v] for v in scope))
        soft.append(SoftConstraint(scope, {t: rng.randint(-4, 6) for t in tuples}))
    return CspInstance(domains, hard, soft)


def box_min(sys: IlpSystem, f):
    """Exhaustive minimum over the bound box; ties to the lexicographically smallest point."""
    best = None
    ranges = [range(l, u + 1) for l, u in zip(sys.lower, sys.upper)]
    for x in itertools.product(*ranges):
        if sys.satisfies(x):
            v = f(x)
            if best is None or v < best[1]:
                best = (x, v)
    return best


def random_system(rng: random.Random, max_vars=10, max_d=3, max_rows=4, support=3) -> IlpSystem:
    d = rng.randint(1, max_vars)
    lower = [rng.randint(-1, 1) for _ in range(d)]
    upper = [l + rng.randint(0, max_d) for l in lower]
    rows = []
    for _ in range(rng.randint(0, max_rows)):
        vars_ = rng.sample(range(d), rng.randint(1, min(support, d)))
        coeffs = {j: rng.choice([-2, -1, 1, 1, 2]) for j in vars_}
        # right-hand side from a random box point keeps most systems feasible
        point = [rng.randint(l, u) for l, u in zip(lower, upper)]
        rhs = sum(a * point[j] for j, a in coeffs.items()) + rng.choice([0, 0, 0, 1])
        rows.append((coeffs, rhs))
    return IlpSystem(d, rows, lower, upper)


def interval_system(rng: random.Random, d: int, n_rows: int) -> IlpSystem:
    """0/1 system with consecutive-ones rows, each equal to one: a totally unimodular matrix."""
    rows = []
    covered = set()
    for _ in range(n_rows):
        a = rng.randrange(d)
        b = rng.randrange(a, min(d, a + 4))
        rows.append(({j: 1 for j in range(a, b + 1)}, 1))
        covered.update(range(a, b + 1))
    return IlpSystem(d, rows, [0] * d, [1] * d)
