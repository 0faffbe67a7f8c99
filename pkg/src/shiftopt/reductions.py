"""Instance generators and applications built on the explicit solvers.

* dominating set of size ``r`` as a shifted problem over closed neighborhoods,
* multidemand set cover as a shifted problem with a recursively built cost,
* vulnerability and lexicographic vulnerability objectives,
* weighted set multicover in the succinct variant, solved through partial
  sums so the total demand may be large.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ArithmeticOverflow
from .explicit import ExplicitInstance, Status, solve_concave
from .graph import Graph
from .shift import CostMatrix, Shape, checked


def _dedupe(vectors):
    seen, out = set(), []
    for v in vectors:
        v = tuple(v)
        if v not in seen:
            seen.add(v)
            out.append(v)
    return tuple(out)


def domset_to_sco(g: Graph, r: int) -> ExplicitInstance:
    """Optimum equals ``n`` iff ``g`` has a dominating set of at most ``r`` vertices.

    ``S`` holds the closed-neighborhood indicators (twins collapse to one
    vector); ``c`` rewards the first column only, so the objective counts the
    vertices covered by some chosen neighborhood.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if g.n == 0:
        raise ValueError("graph needs at least one vertex")
    S = _dedupe(tuple(int(u in g.closed_neighborhood(v)) for u in g.vertices) for v in g.vertices)
    c = CostMatrix.from_rows([(1,) + (0,) * (r - 1)] * g.n)
    return ExplicitInstance(S, c)


@dataclass(frozen=True)
class MscInstance:
    """Multidemand set cover: pick ``r`` sets (with repetition) so that every
    element ``i`` is covered a number of times lying in ``demands[i]``."""

    n: int
    r: int
    demands: tuple[frozenset[int], ...]
    family: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(frozenset(d) for d in self.demands))
        object.__setattr__(self, "family", tuple(frozenset(f) for f in self.family))
        if self.r < 1:
            raise ValueError("r must be positive")
        if len(self.demands) != self.n:
            raise ValueError("need one demand set per element")
        if any(not 0 <= x <= self.r for d in self.demands for x in d):
            raise ValueError("demands must lie in 0..r")
        if not self.family:
            raise ValueError("family must not be empty")
        if any(not f or not f <= set(range(self.n)) for f in self.family):
            raise ValueError("family members must be nonempty subsets of the universe")


def msc_cost_row(demand: frozenset[int] | set[int], r: int) -> tuple[int, ...]:
    """Row whose prefix sums are 1 at admissible positive counts and 0 elsewhere.

    A count of zero always scores 0, so a demand set containing 0 is only
    honoured when the element is covered at least once.
    """
    row = [1 if 1 in demand else 0]
    total = row[0]
    for j in range(1, r):
        nxt = (1 if j + 1 in demand else 0) - total
        row.append(nxt)
        total += nxt
    return tuple(row)


def msc_to_sco(inst: MscInstance) -> ExplicitInstance:
    """Optimum is at most ``n``, with equality iff the instance is solvable (0 not in any demand)."""
    S = _dedupe(tuple(int(i in f) for i in range(inst.n)) for f in inst.family)
    c = CostMatrix.from_rows([msc_cost_row(d, inst.r) for d in inst.demands])
    return ExplicitInstance(S, c)


def build_vulnerability_objective(n: int, r: int, k: int) -> CostMatrix:
    """Cost ``-1`` on column ``k`` only: maximizing minimizes the ``k``-vulnerable elements."""
    if not 1 <= k <= r:
        raise ValueError("need 1 <= k <= r")
    row = tuple(-1 if j == k else 0 for j in range(1, r + 1))
    return CostMatrix.from_rows([row] * n)


def build_lexicographic_objective(n: int, r: int) -> CostMatrix:
    """Rows ``(-1, -(n+1), -(n+1)^2, ...)``: fewest ``r``-vulnerable first, then ``r-1``, ..."""
    if n < 1 or r < 1:
        raise ValueError("n and r must be positive")
    checked(n * (n + 1) ** (r - 1))
    row = tuple(-((n + 1) ** (k - 1)) for k in range(1, r + 1))
    return CostMatrix.from_rows([row] * n)


@dataclass(frozen=True)
class WsmSet:
    """A distinct set and the cumulative weights of its lightest copies.

    ``cum_weights[j]`` is the total weight of the ``j`` lightest copies, with
    ``cum_weights[0] == 0``; its length minus one is the number of copies.
    """

    members: frozenset[int]
    cum_weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        cw = tuple(int(v) for v in self.cum_weights)
        object.__setattr__(self, "cum_weights", cw)
        if not cw or cw[0] != 0:
            raise ValueError("cum_weights must start at 0")
        steps = [b - a for a, b in zip(cw, cw[1:])]
        if any(s < 0 for s in steps):
            raise ValueError("copy weights must be nonnegative")
        if any(b < a for a, b in zip(steps, steps[1:])):
            raise ValueError("cum_weights must add the lightest copies first")

    @property
    def copies(self) -> int:
        return len(self.cum_weights) - 1


@dataclass(frozen=True)
class WsmInstance:
    k: int
    demands: tuple[int, ...]
    sets: tuple[WsmSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))
        object.__setattr__(self, "sets", tuple(self.sets))
        if len(self.demands) != self.k or any(d < 0 for d in self.demands):
            raise ValueError("need k nonnegative demands")
        if len({s.members for s in self.sets}) != len(self.sets):
            raise ValueError("sets must be distinct")
        if any(not s.members <= set(range(self.k)) for s in self.sets):
            raise ValueError("set members must lie in the universe")

    @property
    def total_weight(self) -> int:
        return sum(s.cum_weights[-1] for s in self.sets)


@dataclass(frozen=True)
class WsmSolution:
    weight: int
    multiplicities: tuple[int, ...]


def solve_wsm(inst: WsmInstance) -> WsmSolution | None:
    """Minimum-weight multiset of copies meeting every demand, or ``None``.

    One vector ``(f_i, e_i)`` per distinct set plus the zero vector are chosen
    ``D = sum(demands)`` times in total. Element rows reward coverage up to the
    demand at ``big = W + 1`` per unit (``W`` the total weight); set rows charge
    the cumulative weights, extended past the copy count with slope
    ``D * big`` so the rows stay concave. The solution meets all demands
    within the available copies iff the minimum is below ``-(D-1) * big``.
    """
    D = sum(inst.demands)
    K = len(inst.sets)
    if D == 0:
        return WsmSolution(0, (0,) * K)
    if K == 0:
        return None
    big = inst.total_weight + 1
    penalty = checked(D * big)
    k = inst.k
    checked(penalty * D + D * big)

    def min_gamma(i: int, j: int) -> int:
        if i < k:
            return -big * min(j, inst.demands[i])
        s = inst.sets[i - k]
        if j <= s.copies:
            return s.cum_weights[j]
        return s.cum_weights[-1] + (j - s.copies) * penalty

    c = CostMatrix.from_partial_sums(k + K, D, lambda i, j: -min_gamma(i, j), shape=Shape.SHIFTED)
    S = [tuple(int(u in s.members) for u in range(k)) + tuple(int(t == i) for t in range(K))
         for i, s in enumerate(inst.sets)]
    S.append((0,) * (k + K))
    res = solve_concave(ExplicitInstance(tuple(S), c))
    if res.status is not Status.OPTIMAL:
        return None
    minimum = -res.objective
    if not minimum < -(D - 1) * big:
        return None
    mult = res.witness.parts[:K]
    weight = minimum + D * big
    if weight != sum(s.cum_weights[m] for s, m in zip(inst.sets, mult)):
        raise ArithmeticOverflow("recovered weight disagrees with the chosen copies")
    return WsmSolution(weight, tuple(mult))
