"""Shifted integer programming over an explicitly listed set ``S``.

Every ``x`` in ``S^r`` is equivalent, up to column order, to a matrix built
from a composition ``(r_1, ..., r_m)`` of ``r``: ``r_k`` copies of ``s^k``.
The solvers here search composition space:

* :func:`solve_enum` enumerates all compositions (any cost matrix),
* :func:`solve_concave` runs LP-bounded branch-and-bound (rows nonincreasing),
* :func:`solve_vertex` checks the simplex vertices (rows nondecreasing),
* :func:`solve_linopt_oracle` needs only a linear optimization oracle.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import CapExceeded, DimensionMismatch, NotShifted, OracleProtocolError
from .lp import ConcaveProgram, ConcaveTerm, LpStatus, lp_max
from .shift import (
    MATERIALIZATION_CAP, ColumnMatrix, CostMatrix, Shape, checked, sco_objective,
    shiftedness, weight_functions,
)

ENUM_CAP = 10**7
TUPLE_CAP = 10**7
_CHUNK = 1 << 16
_SAFE_INT64 = 2**62


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Composition:
    """Multiplicities ``(r_1, ..., r_m)`` of the members of ``S``."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ValueError("composition parts must be nonnegative")
        object.__setattr__(self, "parts", parts)

    @property
    def r(self) -> int:
        return sum(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


@dataclass(frozen=True)
class SolveResult:
    status: Status
    objective: int | None = None
    witness: Composition | None = None


@dataclass(frozen=True, eq=False)
class ExplicitInstance:
    """Distinct integer vectors ``S``, cost matrix ``c`` and multiplicity ``r``."""

    S: tuple[tuple[int, ...], ...]
    c: CostMatrix

    def __post_init__(self):
        S = tuple(tuple(int(v) for v in s) for s in self.S)
        if not S:
            raise ValueError("S must contain at least one vector")
        n = len(S[0])
        if any(len(s) != n for s in S):
            raise DimensionMismatch("vectors in S have different lengths")
        if len(set(S)) != len(S):
            raise ValueError("vectors in S must be pairwise distinct")
        if self.c.n != n:
            raise DimensionMismatch(f"S has dimension {n} but c has {self.c.n} rows")
        object.__setattr__(self, "S", S)

    @classmethod
    def from_lists(cls, S: Sequence[Sequence[int]], c_rows: Sequence[Sequence[int]]):
        return cls(tuple(map(tuple, S)), CostMatrix.from_rows(c_rows))

    @property
    def n(self) -> int:
        return len(self.S[0])

    @property
    def m(self) -> int:
        return len(self.S)

    @property
    def r(self) -> int:
        return self.c.r

    @cached_property
    def weights(self):
        return weight_functions(self.c)

    @cached_property
    def row_orders(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """Per row: indices of S sorted by nonincreasing entry, and the sorted entries."""
        out = []
        for i in range(self.n):
            order = tuple(sorted(range(self.m), key=lambda k: (-self.S[k][i], k)))
            out.append((order, tuple(self.S[k][i] for k in order)))
        return tuple(out)

    def materialize(self, comp: Composition, cap: int = MATERIALIZATION_CAP) -> ColumnMatrix:
        """Matrix whose first ``r_1`` columns are ``s^1``, next ``r_2`` are ``s^2``, ..."""
        self._check(comp)
        if self.r > cap:
            raise CapExceeded(f"r={self.r} exceeds materialization cap {cap}")
        cols = []
        for s, rk in zip(self.S, comp.parts):
            cols.extend([s] * rk)
        return ColumnMatrix(tuple(cols))

    def _check(self, comp: Composition):
        if len(comp.parts) != self.m:
            raise DimensionMismatch(f"composition has {len(comp.parts)} parts, S has {self.m}")
        if comp.r != self.r:
            raise DimensionMismatch(f"composition sums to {comp.r}, expected r={self.r}")


def f_eval(inst: ExplicitInstance, comp: Composition | Sequence[int]) -> int:
    """Objective of the matrix built from ``comp``, via the telescoping identity.

    Row ``i`` contributes ``sum_k t_k * w_i(g_k) + s_min * w_i(r)`` where ``g_k``
    are prefix sums of the multiplicities in nonincreasing order of the row
    entries and ``t_k`` the gaps between consecutive sorted entries. Only
    ``O(m)`` partial-sum lookups per row are needed, so ``r`` may be huge.
    """
    if not isinstance(comp, Composition):
        comp = Composition(tuple(comp))
    inst._check(comp)
    parts = comp.parts
    w = inst.weights
    r = inst.r
    total = 0
    for i, (order, vals) in enumerate(inst.row_orders):
        g = 0
        for k in range(len(order) - 1):
            g += parts[order[k]]
            gap = vals[k] - vals[k + 1]
            if gap:
                total += gap * w(i, g)
        if vals[-1]:
            total += vals[-1] * w(i, r)
    return checked(total)


def _compositions(r: int, m: int) -> np.ndarray:
    """All compositions of ``r`` into ``m`` parts, lexicographically increasing.

    Stars and bars: lexicographic order of bar positions is lexicographic
    order of the parts.
    """
    if m == 1:
        return np.array([[r]], dtype=np.int64)
    slots = r + m - 1
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(slots), m - 1)),
                       dtype=np.int64, count=count_compositions(r, m) * (m - 1))
    bars = flat.reshape(-1, m - 1)
    n = bars.shape[0]
    edges = np.hstack([np.full((n, 1), -1, dtype=np.int64), bars, np.full((n, 1), slots, dtype=np.int64)])
    return np.diff(edges, axis=1) - 1


def count_compositions(r: int, m: int) -> int:
    return math.comb(r + m - 1, m - 1)


def _row_bound(inst: ExplicitInstance, tables) -> int:
    bound = 0
    for i, (_, vals) in enumerate(inst.row_orders):
        span = sum(a - b for a, b in zip(vals, vals[1:])) + abs(vals[-1])
        bound += span * max(abs(v) for v in tables[i])
    return bound


def _f_batch(inst: ExplicitInstance, comps: np.ndarray, tables, dtype) -> np.ndarray:
    """Vectorized ``f_eval`` over the rows of ``comps``."""
    r = inst.r
    total = np.zeros(comps.shape[0], dtype=dtype)
    for i, (order, vals) in enumerate(inst.row_orders):
        table = np.asarray(tables[i], dtype=dtype)
        g = np.cumsum(comps[:, list(order)], axis=1)
        for k in range(len(order) - 1):
            gap = vals[k] - vals[k + 1]
            if gap:
                total = total + gap * table[g[:, k]]
        if vals[-1]:
            total = total + vals[-1] * table[r]
    return total


def solve_enum(inst: ExplicitInstance, cap: int = ENUM_CAP) -> SolveResult:
    """Exact optimum by enumerating every composition of ``r`` into ``m`` parts.

    Among optimal compositions the lexicographically smallest is returned.
    """
    count = count_compositions(inst.r, inst.m)
    if count > cap:
        raise CapExceeded(f"{count} compositions exceed cap {cap}")
    if not inst.c.explicit and inst.r > MATERIALIZATION_CAP:
        raise CapExceeded("enumeration needs explicit cost columns")
    tables = [inst.weights.table(i) for i in range(inst.n)]
    dtype = np.int64 if _row_bound(inst, tables) < _SAFE_INT64 else object
    comps = _compositions(inst.r, inst.m)
    best_val, best_idx = None, None
    for start in range(0, comps.shape[0], _CHUNK):
        vals = _f_batch(inst, comps[start:start + _CHUNK], tables, dtype)
        j = int(np.argmax(vals))
        v = int(vals[j])
        if best_val is None or v > best_val:
            best_val, best_idx = v, start + j
    return SolveResult(Status.OPTIMAL, checked(best_val),
                       Composition(tuple(int(p) for p in comps[best_idx])))


def brute_force_tuples(inst: ExplicitInstance, cap: int = TUPLE_CAP) -> SolveResult:
    """Exact optimum over all ``m^r`` column tuples, shifting each one explicitly.

    Independent of the composition machinery: every tuple is materialized,
    row-sorted and dotted with ``c``. The witness is the composition of the
    best tuple; ties go to the lexicographically smallest composition.
    """
    m, r, n = inst.m, inst.r, inst.n
    total = m**r
    if total > cap:
        raise CapExceeded(f"{total} tuples exceed cap {cap}")
    c = inst.c.materialize()
    bound = sum(abs(v) for row in c.rows for v in row) * max(abs(v) for s in inst.S for v in s)
    dtype = np.int64 if bound < _SAFE_INT64 else object
    S = np.array(inst.S, dtype=dtype)
    C = np.array(c.rows, dtype=dtype)  # n x r
    best_val, best_comp = None, None
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(total, start + _CHUNK))
        idx = np.stack(np.unravel_index(flat, (m,) * r), axis=1) if r > 0 else flat[:, None]
        X = S[idx]  # tuples x r x n
        Xbar = -np.sort(-X, axis=1) if dtype is np.int64 else np.array(
            [sorted(col, reverse=True) for col in X.transpose(0, 2, 1).reshape(-1, r)],
            dtype=object).reshape(len(flat), n, r).transpose(0, 2, 1)
        vals = np.einsum("trn,nr->t", Xbar, C) if dtype is np.int64 else np.array(
            [sum(Xbar[t, k, i] * C[i, k] for i in range(n) for k in range(r))
             for t in range(len(flat))], dtype=object)
        v = max(int(a) for a in vals) if dtype is object else int(vals.max())
        for t in np.flatnonzero(vals == v):
            comp = tuple(np.bincount(idx[t], minlength=m).tolist())
            if best_val is None or v > best_val or (v == best_val and comp < best_comp):
                best_val, best_comp = v, comp
    return SolveResult(Status.OPTIMAL, checked(best_val), Composition(best_comp))


def _nonincreasing_rows(c: CostMatrix) -> bool:
    return shiftedness(c) is Shape.SHIFTED


def _nondecreasing_rows(c: CostMatrix) -> bool:
    if not c.explicit and c.r > MATERIALIZATION_CAP:
        if c.shape is None:
            raise CapExceeded("declare the shape of huge partial-sums matrices")
        return c.shape is Shape.ANTI_SHIFTED
    rows = c.materialize().rows
    return all(a <= b for row in rows for a, b in zip(row, row[1:]))


class _ConcaveModel:
    """The concave relaxation of ``r_k -> f(r_1, ..., r_m)`` for shifted ``c``."""

    def __init__(self, inst: ExplicitInstance):
        self.inst = inst
        w = inst.weights
        r = inst.r
        terms: dict[tuple, Fraction] = {}
        linear: dict[int, Fraction] = {}
        constant = 0
        for i, (order, vals) in enumerate(inst.row_orders):
            bps = w.breakpoints(i)
            points = tuple((Fraction(x), Fraction(w(i, x))) for x in bps)
            slope = (points[-1][1] - points[0][1]) / r
            for k in range(len(order) - 1):
                gap = vals[k] - vals[k + 1]
                if not gap:
                    continue
                prefix = frozenset(order[:k + 1])
                if len(points) == 2:
                    for j in prefix:
                        linear[j] = linear.get(j, Fraction(0)) + gap * slope
                else:
                    key = (prefix, points)
                    terms[key] = terms.get(key, Fraction(0)) + gap
            constant += vals[-1] * w(i, r)
        self.terms = [ConcaveTerm(weight, {j: Fraction(1) for j in sorted(prefix)}, points)
                      for (prefix, points), weight in terms.items()]
        self.linear = linear
        self.constant = Fraction(constant)

    def program(self, lo: Sequence[int], hi: Sequence[int]) -> ConcaveProgram:
        m = self.inst.m
        return ConcaveProgram(
            num_vars=m,
            bounds=list(zip(lo, hi)),
            equalities=[({j: Fraction(1) for j in range(m)}, Fraction(self.inst.r))],
            terms=self.terms,
            linear=dict(self.linear),
            constant=self.constant,
        )


def relaxation(inst: ExplicitInstance, lo=None, hi=None) -> ConcaveProgram:
    """Concave program whose optimum bounds ``f`` over the box ``lo <= r_k <= hi``."""
    lo = lo if lo is not None else [0] * inst.m
    hi = hi if hi is not None else [inst.r] * inst.m
    return _ConcaveModel(inst).program(lo, hi)


def _lexmin_in_box(r: int, lo, hi) -> tuple[int, ...] | None:
    if sum(lo) > r or sum(hi) < r:
        return None
    rest_max = sum(hi)
    remaining = r
    out = []
    for a, b in zip(lo, hi):
        rest_max -= b
        v = max(a, remaining - rest_max)
        out.append(v)
        remaining -= v
    return tuple(out)


def _round_in_box(point, r: int, hi) -> tuple[int, ...]:
    base = [math.floor(v) for v in point]
    short = r - sum(base)
    order = sorted(range(len(point)), key=lambda k: (-(point[k] - base[k]), k))
    for k in order:
        if short == 0:
            break
        if base[k] < hi[k] and point[k] > base[k]:
            base[k] += 1
            short -= 1
    return tuple(base)


def solve_concave(inst: ExplicitInstance) -> SolveResult:
    """Exact optimum for a shifted cost matrix (rows nonincreasing).

    The objective is concave in the multiplicities, so an exact rational LP
    over its epigraph relaxation gives valid upper bounds for branch-and-bound.
    ``m == 1`` and ``m == 2`` are handled in closed form and by binary search
    on the slope of the concave univariate map. ``r`` may be given only through
    partial sums and can be huge. Ties go to the lexicographically smallest
    composition.
    """
    if not _nonincreasing_rows(inst.c):
        raise NotShifted("solve_concave requires a shifted cost matrix")
    m, r = inst.m, inst.r
    if m == 1:
        comp = Composition((r,))
        return SolveResult(Status.OPTIMAL, f_eval(inst, comp), comp)
    if m == 2:
        def f(a):
            return f_eval(inst, (a, r - a))
        lo, hi = 0, r
        while lo < hi:
            mid = (lo + hi) // 2
            if f(mid + 1) > f(mid):
                lo = mid + 1
            else:
                hi = mid
        comp = Composition((lo, r - lo))
        return SolveResult(Status.OPTIMAL, f(lo), comp)
    return _branch_and_bound(inst)


def _branch_and_bound(inst: ExplicitInstance) -> SolveResult:
    m, r = inst.m, inst.r
    model = _ConcaveModel(inst)
    best_val, best_comp = None, None

    def offer(comp):
        nonlocal best_val, best_comp
        v = f_eval(inst, comp)
        if best_val is None or v > best_val or (v == best_val and comp < best_comp):
            best_val, best_comp = v, comp

    stack = [((0,) * m, (r,) * m)]
    while stack:
        lo, hi = stack.pop()
        lexmin = _lexmin_in_box(r, lo, hi)
        if lexmin is None:
            continue
        res = lp_max(model.program(lo, hi))
        if res.status is not LpStatus.OPTIMAL:
            continue
        bound = math.floor(res.value)
        if best_val is not None and (bound < best_val or (bound == best_val and lexmin >= best_comp)):
            continue
        offer(lexmin)
        point = res.point
        rounded = _round_in_box(point, r, hi)
        offer(rounded)
        if best_val is not None and (bound < best_val or (bound == best_val and lexmin >= best_comp)):
            continue
        frac = next((k for k, v in enumerate(point) if v.denominator != 1), None)
        if frac is not None:
            cut = math.floor(point[frac])
            left_hi = hi[:frac] + (cut,) + hi[frac + 1:]
            right_lo = lo[:frac] + (cut + 1,) + lo[frac + 1:]
        else:
            frac = next(k for k in range(m) if lo[k] < hi[k])
            cut = (lo[frac] + hi[frac]) // 2
            left_hi = hi[:frac] + (cut,) + hi[frac + 1:]
            right_lo = lo[:frac] + (cut + 1,) + lo[frac + 1:]
        # explore the lower half first: it holds the lexicographically smaller points
        stack.append((right_lo, hi))
        stack.append((lo, left_hi))
    return SolveResult(Status.OPTIMAL, best_val, Composition(best_comp))


def solve_vertex(inst: ExplicitInstance) -> SolveResult:
    """Optimum for rows nondecreasing: ``f`` is convex, so a vertex ``r e_k`` wins.

    The vertex value is ``w . s^k`` with ``w`` the row sums of ``c``.
    """
    if not _nondecreasing_rows(inst.c):
        raise NotShifted("solve_vertex requires nondecreasing cost rows")
    w = [inst.weights(i, inst.r) for i in range(inst.n)]
    best_k, best_val = 0, None
    for k, s in enumerate(inst.S):
        v = sum(a * b for a, b in zip(w, s))
        if best_val is None or v > best_val:
            best_k, best_val = k, v
    parts = [0] * inst.m
    parts[best_k] = inst.r
    return SolveResult(Status.OPTIMAL, checked(best_val), Composition(tuple(parts)))


class LinOptOracle:
    """Linear optimization oracle over an implicit set ``S``.

    ``solve(w)`` returns ``Status.INFEASIBLE``, ``Status.UNBOUNDED`` or a vector
    ``s`` in ``S`` maximizing ``w . s``. An optional ``member`` predicate is
    applied to every returned vector.
    """

    def __init__(self, solve: Callable[[tuple[int, ...]], object],
                 member: Callable[[tuple[int, ...]], bool] | None = None):
        self._solve = solve
        self.member = member

    def __call__(self, w):
        return self._solve(tuple(w))

    @classmethod
    def from_set(cls, S: Sequence[Sequence[int]]) -> "LinOptOracle":
        """Oracle over a finite list; the first maximizer is returned."""
        members = [tuple(s) for s in S]
        lookup = set(members)

        def solve(w):
            if not members:
                return Status.INFEASIBLE
            return max(members, key=lambda s: (sum(a * b for a, b in zip(w, s)),
                                               -members.index(s)))
        return cls(solve, member=lookup.__contains__)


@dataclass(frozen=True)
class OracleSolution:
    """Result of the oracle solver: ``vector`` repeated ``r`` times."""

    status: Status
    objective: int | None = None
    vector: tuple[int, ...] | None = None
    r: int = 0

    @property
    def columns(self) -> ColumnMatrix | None:
        if self.vector is None:
            return None
        if self.r > MATERIALIZATION_CAP:
            raise CapExceeded(f"r={self.r} exceeds materialization cap")
        return ColumnMatrix((self.vector,) * self.r)


def solve_linopt_oracle(oracle: LinOptOracle | Callable, c: CostMatrix, r: int | None = None
                        ) -> OracleSolution:
    """Solve with nondecreasing cost rows using one oracle call on the row sums."""
    if r is not None and r != c.r:
        raise DimensionMismatch(f"r={r} but cost matrix has {c.r} columns")
    if not _nondecreasing_rows(c):
        raise NotShifted("oracle solver requires nondecreasing cost rows")
    w = tuple(c.partial_sum(i, c.r) for i in range(c.n))
    answer = oracle(w)
    if answer is Status.INFEASIBLE or answer is Status.UNBOUNDED:
        return OracleSolution(answer, r=c.r)
    if isinstance(answer, Status):
        raise OracleProtocolError(f"oracle returned status {answer}")
    s = tuple(int(v) for v in answer)
    if len(s) != c.n:
        raise OracleProtocolError(f"oracle returned a vector of length {len(s)}, expected {c.n}")
    member = getattr(oracle, "member", None)
    if member is not None and not member(s):
        raise OracleProtocolError(f"oracle returned {s}, which is not in S")
    value = checked(sum(a * b for a, b in zip(w, s)))
    return OracleSolution(Status.OPTIMAL, value, s, c.r)


def solve_auto(inst: ExplicitInstance) -> SolveResult:
    """Dispatch on the shape of ``c``: concave, vertex, or enumeration."""
    shape = shiftedness(inst.c)
    if shape is Shape.SHIFTED:
        return solve_concave(inst)
    if shape is Shape.ANTI_SHIFTED:
        return solve_vertex(inst)
    if not inst.c.explicit:
        raise NotShifted("partial-sums instances must be shifted or anti-shifted")
    return solve_enum(inst)


SOLVERS = {
    "auto": solve_auto,
    "enum": solve_enum,
    "concave": solve_concave,
    "vertex": solve_vertex,
    "brute": brute_force_tuples,
}
