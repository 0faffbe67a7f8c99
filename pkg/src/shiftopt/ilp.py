"""Integer equality systems of bounded Gaifman treewidth.

``separable_min`` turns ``min sum f_i(x_i) s.t. A x = b, l <= x <= u`` into a
weighted CSP (one hard constraint per row, one unary weight per variable) and
solves it over a tree decomposition of the constraint graph, so the cost is
exponential only in the treewidth of the system's Gaifman graph. Decomposable
0/1 systems additionally support splitting points of ``kQ`` into ``k`` points
of ``Q`` by greedy peeling.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from .csp import CspInstance, HardConstraint, SoftConstraint, csp_solve
from .errors import DecomposabilityViolated, SupportTooLarge
from .graph import Graph
from .shift import checked
from .treedec import TreeDecomposition

SUPPORT_CAP = 16
_TABLE_LIMIT = 1 << 16


@dataclass(frozen=True)
class IlpSystem:
    """``A x = b`` with integer bounds ``lower <= x <= upper``.

    Rows are stored sparsely as ``({column: coefficient}, rhs)``.
    """

    num_vars: int
    rows: tuple[tuple[tuple[tuple[int, int], ...], int], ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __init__(self, num_vars: int, rows: Sequence[tuple[Mapping[int, int], int]],
                 lower: Sequence[int], upper: Sequence[int]):
        norm = []
        for coeffs, rhs in rows:
            items = tuple(sorted((int(j), int(a)) for j, a in dict(coeffs).items() if a))
            if any(not 0 <= j < num_vars for j, _ in items):
                raise ValueError("row references a variable out of range")
            norm.append((items, int(rhs)))
        lower, upper = tuple(int(v) for v in lower), tuple(int(v) for v in upper)
        if len(lower) != num_vars or len(upper) != num_vars:
            raise ValueError("bounds must have one entry per variable")
        if any(a > b for a, b in zip(lower, upper)):
            raise ValueError("lower bound exceeds upper bound")
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "rows", tuple(norm))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_dense(cls, A: Sequence[Sequence[int]], b: Sequence[int],
                   lower: Sequence[int], upper: Sequence[int]) -> "IlpSystem":
        rows = [({j: a for j, a in enumerate(row) if a}, rhs) for row, rhs in zip(A, b)]
        return cls(len(lower), rows, lower, upper)

    @property
    def domain_size(self) -> int:
        """``D = max(u - l)``."""
        return max((u - l for l, u in zip(self.lower, self.upper)), default=0)

    def satisfies(self, x: Sequence[int]) -> bool:
        if len(x) != self.num_vars:
            return False
        if any(not l <= v <= u for v, l, u in zip(x, self.lower, self.upper)):
            return False
        return all(sum(a * x[j] for j, a in items) == rhs for items, rhs in self.rows)

    def with_bounds(self, lower: Sequence[int], upper: Sequence[int]) -> "IlpSystem":
        return IlpSystem(self.num_vars, [(dict(items), rhs) for items, rhs in self.rows], lower, upper)


@dataclass(frozen=True)
class SeparableObjective:
    """``f(x) = sum_i f_i(x_i)``; a ``None`` entry is the zero function."""

    funcs: tuple[Callable[[int], int] | Mapping[int, int] | None, ...]

    @classmethod
    def zero(cls, d: int) -> "SeparableObjective":
        return cls((None,) * d)

    def term(self, i: int, x: int) -> int:
        f = self.funcs[i]
        if f is None:
            return 0
        if callable(f):
            return int(f(x))
        return int(f[x])

    def __call__(self, x: Sequence[int]) -> int:
        return sum(self.term(i, v) for i, v in enumerate(x))


@dataclass(frozen=True)
class IlpSolution:
    x: tuple[int, ...]
    value: int


@dataclass(frozen=True, eq=False)
class DecomposableExtension:
    """0/1 system ``Q`` whose ``projection`` coordinates carry the set ``S``.

    ``decomposable`` is a claim by the constructor: every integer point of
    every ``kQ`` is a sum of ``k`` integer points of ``Q``.
    """

    system: IlpSystem
    projection: tuple[int, ...]
    decomposable: bool = False
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "projection", tuple(self.projection))
        if any(not 0 <= j < self.system.num_vars for j in self.projection):
            raise ValueError("projection index out of range")
        if len(set(self.projection)) != len(self.projection):
            raise ValueError("projection indices must be distinct")
        if any(l not in (0, 1) or u not in (0, 1) for l, u in zip(self.system.lower, self.system.upper)):
            raise ValueError("extension bounds must be 0/1")

    def project(self, point: Sequence[int]) -> tuple[int, ...]:
        return tuple(point[j] for j in self.projection)


def gaifman_graph(sys: IlpSystem) -> Graph:
    """Variables adjacent iff they share a row with nonzero coefficients."""
    edges = set()
    for items, _ in sys.rows:
        cols = [j for j, _ in items]
        edges.update(itertools.combinations(cols, 2))
    return Graph(sys.num_vars, edges)


def _row_constraint(items, rhs, lower, upper) -> HardConstraint:
    scope = tuple(j for j, _ in items)
    coeffs = tuple(a for _, a in items)

    def holds(values):
        return sum(a * v for a, v in zip(coeffs, values)) == rhs

    size = math.prod(upper[j] - lower[j] + 1 for j in scope)
    if size <= _TABLE_LIMIT:
        table = [t for t in itertools.product(*(range(lower[j], upper[j] + 1) for j in scope))
                 if holds(t)]
        return HardConstraint(scope, table)
    return HardConstraint(scope, holds)


def to_csp(sys: IlpSystem, f: SeparableObjective | None = None,
           support_cap: int = SUPPORT_CAP) -> CspInstance:
    """The CSP whose feasible assignments are the integer points of ``sys``."""
    domains = [tuple(range(l, u + 1)) for l, u in zip(sys.lower, sys.upper)]
    hard = []
    for items, rhs in sys.rows:
        if len(items) > support_cap:
            raise SupportTooLarge(f"row with {len(items)} nonzeros exceeds cap {support_cap}")
        if not items:
            hard.append(HardConstraint((), [()] if rhs == 0 else []))
            continue
        hard.append(_row_constraint(items, rhs, sys.lower, sys.upper))
    soft = []
    if f is not None:
        for i in range(sys.num_vars):
            if f.funcs[i] is not None:
                soft.append(SoftConstraint((i,), {(x,): f.term(i, x) for x in domains[i]}))
    return CspInstance(domains, hard, soft)


def separable_min(sys: IlpSystem, f: SeparableObjective | None = None,
                  td: TreeDecomposition | None = None, support_cap: int = SUPPORT_CAP,
                  prefer: str = "min") -> IlpSolution | None:
    """Minimize a separable objective over the integer points of ``sys``.

    Returns ``None`` when the system has no integer point. Bounds are finite,
    so the problem is never unbounded. Ties go to the lexicographically
    smallest point (``prefer="max"``: largest).
    """
    if f is None:
        f = SeparableObjective.zero(sys.num_vars)
    if len(f.funcs) != sys.num_vars:
        raise ValueError("objective must have one function per variable")
    sol = csp_solve(to_csp(sys, f, support_cap), td, prefer=prefer)
    if sol is None:
        return None
    return IlpSolution(sol.assignment, checked(sol.weight))


def scale_system(ext: DecomposableExtension | IlpSystem, k: int) -> IlpSystem:
    """``kQ``: right-hand sides and bounds multiplied by ``k``."""
    if k < 1:
        raise ValueError("scale factor must be positive")
    sys = ext.system if isinstance(ext, DecomposableExtension) else ext
    rows = [(dict(items), checked(k * rhs)) for items, rhs in sys.rows]
    return IlpSystem(sys.num_vars, rows, [k * l for l in sys.lower], [k * u for u in sys.upper])


def decompose(ext: DecomposableExtension, k: int, z: Sequence[int],
              td: TreeDecomposition | None = None) -> list[tuple[int, ...]]:
    """Split an integer point ``z`` of ``kQ`` into ``k`` integer points of ``Q``.

    Peels one point at a time: for ``j = k, ..., 2`` a point ``s`` of ``Q`` with
    ``z - s`` in ``(j-1)Q`` is found by a feasibility query (lexicographically
    largest ``s``), then ``z`` is reduced by ``s``. A failed query means ``Q``
    was not decomposable after all and raises ``DecomposabilityViolated``.
    """
    if not ext.decomposable:
        raise DecomposabilityViolated("extension is not asserted decomposable")
    z = tuple(int(v) for v in z)
    if not scale_system(ext, k).satisfies(z):
        raise ValueError("z is not an integer point of the scaled system")
    sys = ext.system
    pieces = []
    for j in range(k, 1, -1):
        lower = [max(l, v - (j - 1) * u) for v, l, u in zip(z, sys.lower, sys.upper)]
        upper = [min(u, v - (j - 1) * l) for v, l, u in zip(z, sys.lower, sys.upper)]
        if any(a > b for a, b in zip(lower, upper)):
            raise DecomposabilityViolated(f"residual leaves no room at step {j}")
        sol = separable_min(sys.with_bounds(lower, upper), td=td, prefer="max")
        if sol is None:
            raise DecomposabilityViolated(f"no point of Q can be peeled at step {j}")
        pieces.append(sol.x)
        z = tuple(a - b for a, b in zip(z, sol.x))
    pieces.append(z)
    _check_pieces(sys, pieces)
    return pieces


def _check_pieces(sys: IlpSystem, pieces) -> None:
    for p in pieces:
        if not sys.satisfies(p):
            raise DecomposabilityViolated(f"peeled point {p} is not in Q")


def integer_points(sys: IlpSystem) -> Iterator[tuple[int, ...]]:
    """All integer points of ``sys`` by backtracking with row-bound propagation.

    Meant as an oracle for small systems; points are produced in
    lexicographic order.
    """
    d = sys.num_vars
    rows = [(dict(items), rhs) for items, rhs in sys.rows]
    by_var = [[] for _ in range(d)]
    for r, (coeffs, _) in enumerate(rows):
        for j in coeffs:
            by_var[j].append(r)
    lo, hi = list(sys.lower), list(sys.upper)

    def propagate(lo, hi, queue) -> bool:
        pending = set(queue)
        queue = list(queue)
        while queue:
            r = queue.pop()
            pending.discard(r)
            coeffs, rhs = rows[r]
            mn = sum(a * (lo[j] if a > 0 else hi[j]) for j, a in coeffs.items())
            mx = sum(a * (hi[j] if a > 0 else lo[j]) for j, a in coeffs.items())
            if not mn <= rhs <= mx:
                return False
            for j, a in coeffs.items():
                if lo[j] == hi[j]:
                    continue
                # tighten x_j using the slack of the other terms
                rest_mn = mn - a * (lo[j] if a > 0 else hi[j])
                rest_mx = mx - a * (hi[j] if a > 0 else lo[j])
                if a > 0:
                    new_lo = -((rest_mx - rhs) // a)
                    new_hi = (rhs - rest_mn) // a
                else:
                    new_lo = -((rhs - rest_mn) // -a)
                    new_hi = (rest_mx - rhs) // -a
                if new_lo > lo[j] or new_hi < hi[j]:
                    lo[j], hi[j] = max(lo[j], new_lo), min(hi[j], new_hi)
                    if lo[j] > hi[j]:
                        return False
                    for r2 in by_var[j]:
                        if r2 not in pending:
                            pending.add(r2)
                            queue.append(r2)
        return True

    def search(lo, hi, queue):
        if not propagate(lo, hi, queue):
            return
        free = next((j for j in range(d) if lo[j] < hi[j]), None)
        if free is None:
            yield tuple(lo)
            return
        for v in range(lo[free], hi[free] + 1):
            nlo, nhi = list(lo), list(hi)
            nlo[free] = nhi[free] = v
            yield from search(nlo, nhi, by_var[free])

    yield from search(lo, hi, range(len(rows)))
