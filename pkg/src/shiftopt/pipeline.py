"""Shifted optimization over 0/1 sets given by a decomposable extension.

For 0/1 columns the shifted objective only depends on the column sums:
``c . shift(x) = sum_i w_i(x_i^1 + ... + x_i^r)``. So one separable
minimization over ``rQ`` followed by one decomposition of the optimum into
``r`` points of ``Q`` solves the problem. Partition problems (chromatic and
domatic number, (a:b)-coloring) are instances with special cost matrices.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Sequence

from .catalog import Predicate, RunPolytope, build_automaton, predicate_check, run_polytope
from .errors import DimensionMismatch
from .explicit import Status
from .graph import Graph
from .ilp import DecomposableExtension, IlpSystem, SeparableObjective, decompose, scale_system, separable_min
from .shift import MATERIALIZATION_CAP, ColumnMatrix, CostMatrix, checked, sco_objective, weight_functions

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineResult:
    status: Status
    objective: int | None = None
    columns: tuple[tuple[int, ...], ...] = ()

    @property
    def sets(self) -> list[frozenset[int]]:
        return [frozenset(i for i, v in enumerate(col) if v) for col in self.columns]


def simplex_extension(S: Sequence[Sequence[int]]) -> DecomposableExtension:
    """Extension of ``conv(S)`` for 0/1 vectors: ``x = sum_k lambda_k s^k``, ``sum lambda = 1``.

    Variables ``0..n-1`` are ``x``; the rest are the ``lambda_k``.
    """
    S = [tuple(s) for s in S]
    n, m = len(S[0]), len(S)
    if any(v not in (0, 1) for s in S for v in s):
        raise ValueError("simplex extension needs 0/1 vectors")
    rows = [({n + k: 1 for k in range(m)}, 1)]
    for i in range(n):
        row = {i: 1}
        for k, s in enumerate(S):
            if s[i]:
                row[n + k] = -1
        rows.append((row, 0))
    system = IlpSystem(n + m, rows, [0] * (n + m), [1] * (n + m))
    return DecomposableExtension(system, tuple(range(n)), True)


def _structured(ext, method: str) -> bool:
    if method == "generic":
        return False
    if method == "structured":
        if not isinstance(ext, RunPolytope):
            raise TypeError("structured oracles are only available for run polytopes")
        return True
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return isinstance(ext, RunPolytope)


def solve_sco_extension(ext: DecomposableExtension, c: CostMatrix, r: int | None = None,
                        method: str = "auto") -> PipelineResult:
    """Maximize ``c . shift(x)`` over ``x`` in ``S^r`` where ``S`` = 0/1 points of ``ext``.

    The separable objective ``-w_i`` on the projection coordinates is minimized
    over ``rQ``, then the optimum is decomposed into ``r`` points of ``Q``.
    ``method="generic"`` uses the CSP-based oracle and greedy peeling for any
    decomposable extension; ``"structured"`` uses the run-polytope oracles;
    ``"auto"`` picks the structured ones when available.
    """
    r = c.r if r is None else r
    if r != c.r:
        raise DimensionMismatch(f"r={r} but cost matrix has {c.r} columns")
    if len(ext.projection) != c.n:
        raise DimensionMismatch(f"extension projects to {len(ext.projection)} coordinates, c has {c.n} rows")
    w = weight_functions(c)
    funcs: list = [None] * ext.system.num_vars
    for i, j in enumerate(ext.projection):
        funcs[j] = (lambda x, i=i: -w(i, x))
    f = SeparableObjective(tuple(funcs))
    if _structured(ext, method):
        sol = ext.optimize_scaled(r, f)
        if sol is None:
            return PipelineResult(Status.INFEASIBLE)
        pieces = ext.decompose_scaled(r, sol.x)
    else:
        sol = separable_min(scale_system(ext, r), f)
        if sol is None:
            return PipelineResult(Status.INFEASIBLE)
        pieces = decompose(ext, r, sol.x)
    columns = tuple(ext.project(p) for p in pieces)
    sums = [sum(col[i] for col in columns) for i in range(c.n)]
    objective = checked(-sol.value)
    if objective != sum(w(i, x) for i, x in enumerate(sums)):
        raise AssertionError("objective differs from the sum of weights of the column sums")
    if r <= MATERIALIZATION_CAP and sco_objective(c, ColumnMatrix(columns)) != objective:
        raise AssertionError("decomposed columns do not attain the reported objective")
    return PipelineResult(Status.OPTIMAL, objective, columns)


def build_partition_objective(n: int, r: int) -> CostMatrix:
    """Rows ``(1, -1, ..., -1)``: value ``n`` exactly when the columns partition the ground set."""
    if n < 1 or r < 1:
        raise ValueError("n and r must be positive")
    return CostMatrix.from_rows([(1,) + (-1,) * (r - 1)] * n)


def _extension(p: Predicate, g: Graph) -> RunPolytope:
    return run_polytope(build_automaton(p, g))


def partition_solve(p: Predicate, g: Graph, r: int, method: str = "auto",
                    ext: DecomposableExtension | None = None) -> list[frozenset[int]] | None:
    """Split the vertices into ``r`` sets each satisfying ``p``, or return ``None``.

    Parts may be empty when the empty set satisfies ``p``.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if g.n == 0:
        return [frozenset()] * r if predicate_check(p, g, ()) else None
    ext = ext if ext is not None else _extension(p, g)
    res = solve_sco_extension(ext, build_partition_objective(g.n, r), r, method)
    if res.status is not Status.OPTIMAL or res.objective != g.n:
        return None
    parts = res.sets
    seen: set[int] = set()
    for part in parts:
        if seen & part or not predicate_check(p, g, part):
            raise AssertionError(f"decomposed part {sorted(part)} is not a valid block")
        seen |= part
    if seen != set(g.vertices):
        raise AssertionError("decomposed parts do not cover the vertices")
    return parts


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"


def min_parts_search(p: Predicate, g: Graph, direction: Direction | None = None,
                     method: str = "auto") -> int:
    """Smallest (``MIN``) or largest (``MAX``) feasible number of parts; 0 if none.

    ``MIN`` with independent sets is the chromatic number; ``MAX`` with
    dominating sets is the domatic number. The default direction is ``MAX``
    for dominating sets and ``MIN`` otherwise.
    """
    if direction is None:
        direction = Direction.MAX if p is Predicate.DOMINATING_SET else Direction.MIN
    if g.n == 0:
        return 0
    ext = _extension(p, g)
    if direction is Direction.MIN:
        candidates = range(1, g.n + 1)
    else:
        top = g.n
        if p is Predicate.DOMINATING_SET:
            # each part must meet every closed neighborhood
            top = min(top, min(len(g.neighbors(v)) for v in g.vertices) + 1)
        smallest = _smallest_member(ext, g.n, method)
        if smallest is None:
            return 0
        if smallest > 0:
            # parts are disjoint members, so at most n // smallest of them
            top = min(top, g.n // smallest)
        candidates = range(top, 0, -1)
    for r in candidates:
        log.debug("probing r=%d", r)
        if partition_solve(p, g, r, method, ext) is not None:
            return r
    return 0


def _smallest_member(ext: DecomposableExtension, n: int, method: str) -> int | None:
    """Fewest ones in a 0/1 point of ``ext``; ``None`` if it has no point."""
    res = solve_sco_extension(ext, CostMatrix.from_rows([(-1,)] * n), 1, method)
    return None if res.status is not Status.OPTIMAL else -res.objective


def chromatic_number(g: Graph, method: str = "auto") -> int:
    return min_parts_search(Predicate.INDEPENDENT_SET, g, Direction.MIN, method)


def domatic_number(g: Graph, method: str = "auto") -> int:
    return min_parts_search(Predicate.DOMINATING_SET, g, Direction.MAX, method)


def ab_objective(n: int, a: int, b: int) -> CostMatrix:
    if not 1 <= b <= a:
        raise ValueError("need 1 <= b <= a")
    return CostMatrix.from_rows([(1,) * b + (-1,) * (a - b)] * n)


def ab_coloring(g: Graph, a: int, b: int, method: str = "auto") -> list[frozenset[int]] | None:
    """Give every vertex ``b`` of ``a`` colors so that adjacent vertices share none.

    Returns the color set of each vertex, or ``None`` if impossible.
    """
    c = ab_objective(max(g.n, 1), a, b)
    if g.n == 0:
        return []
    res = solve_sco_extension(_extension(Predicate.INDEPENDENT_SET, g), c, a, method)
    if res.status is not Status.OPTIMAL or res.objective != b * g.n:
        return None
    colors = [frozenset(j for j, col in enumerate(res.columns) if col[v]) for v in g.vertices]
    for u, v in g.edges:
        if colors[u] & colors[v]:
            raise AssertionError("adjacent vertices share a color")
    if any(len(cs) != b for cs in colors):
        raise AssertionError("a vertex did not receive b colors")
    return colors
