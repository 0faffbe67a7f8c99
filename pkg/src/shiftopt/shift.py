"""Shift algebra: the shift operator, shifted objective, and partial-sum weights.

A matrix ``x`` with ``r`` columns from ``S`` is scored through its shift, the
matrix obtained by sorting every row into nonincreasing order. All arithmetic
is on Python integers and checked against a signed 64-bit range so that large
gadget constructions fail loudly instead of wrapping.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .errors import ArithmeticOverflow, CapExceeded, DimensionMismatch, NotShifted

INT_MIN = -(2**63)
INT_MAX = 2**63 - 1

#: Largest r for which partial-sums cost matrices may be expanded column by column.
MATERIALIZATION_CAP = 10**6


def checked(value: int) -> int:
    """Return ``value`` unchanged, raising if it does not fit a signed 64-bit word."""
    if value < INT_MIN or value > INT_MAX:
        raise ArithmeticOverflow(f"integer {value} exceeds the 64-bit range")
    return value


class Shape(enum.Enum):
    SHIFTED = "shifted"
    ANTI_SHIFTED = "anti_shifted"
    NEITHER = "neither"


@dataclass(frozen=True)
class ColumnMatrix:
    """An ``n x r`` integer matrix stored column by column."""

    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cols = tuple(tuple(int(v) for v in col) for col in self.columns)
        if not cols:
            raise ValueError("a column matrix needs at least one column")
        n = len(cols[0])
        if any(len(col) != n for col in cols):
            raise DimensionMismatch("columns have different lengths")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ColumnMatrix":
        rows = [tuple(row) for row in rows]
        if not rows:
            raise ValueError("a column matrix needs at least one row")
        return cls(tuple(zip(*rows)))

    @property
    def n(self) -> int:
        return len(self.columns[0])

    @property
    def r(self) -> int:
        return len(self.columns)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.columns))


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Cost matrix ``c`` in ``Z^{n x r}``, explicit or given by partial sums.

    The partial-sums form supplies ``gamma(i, j) = c_i^1 + ... + c_i^j`` so that
    ``r`` may be astronomically large. ``shape`` is an optional declaration of
    the row monotonicity, used when ``r`` is too large to verify it by scanning.
    """

    n: int
    r: int
    rows: tuple[tuple[int, ...], ...] | None = None
    gamma: Callable[[int, int], int] | None = field(default=None, repr=False)
    shape: Shape | None = None

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("multiplicity r must be at least 1")
        if self.n < 1:
            raise ValueError("cost matrix needs at least one row")
        if self.rows is None and self.gamma is None:
            raise ValueError("need explicit rows or a partial-sums oracle")
        if self.rows is not None:
            rows = tuple(tuple(checked(int(v)) for v in row) for row in self.rows)
            if len(rows) != self.n or any(len(row) != self.r for row in rows):
                raise DimensionMismatch("cost rows do not match n x r")
            object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CostMatrix":
        rows = tuple(tuple(row) for row in rows)
        if not rows:
            raise ValueError("cost matrix needs at least one row")
        return cls(n=len(rows), r=len(rows[0]), rows=rows)

    @classmethod
    def from_partial_sums(cls, n: int, r: int, gamma: Callable[[int, int], int],
                          shape: Shape | None = None) -> "CostMatrix":
        return cls(n=n, r=r, gamma=gamma, shape=shape)

    @property
    def explicit(self) -> bool:
        return self.rows is not None

    def partial_sum(self, i: int, j: int) -> int:
        """``gamma(i, j)``; zero for ``j == 0``."""
        if not 0 <= j <= self.r:
            raise IndexError(f"partial sum index {j} outside 0..{self.r}")
        if j == 0:
            return 0
        if self.gamma is not None:
            return checked(int(self.gamma(i, j)))
        return checked(sum(self.rows[i][:j]))

    def entry(self, i: int, k: int) -> int:
        """Entry ``c_i^k`` with 1-based column index ``k``."""
        if self.rows is not None:
            return self.rows[i][k - 1]
        return checked(self.partial_sum(i, k) - self.partial_sum(i, k - 1))

    def materialize(self, cap: int = MATERIALIZATION_CAP) -> "CostMatrix":
        """Explicit copy; partial-sums matrices are expanded if ``r <= cap``."""
        if self.rows is not None:
            return self
        if self.r > cap:
            raise CapExceeded(f"r={self.r} exceeds materialization cap {cap}")
        rows = []
        for i in range(self.n):
            sums = [self.partial_sum(i, j) for j in range(self.r + 1)]
            rows.append(tuple(b - a for a, b in zip(sums, sums[1:])))
        return CostMatrix(n=self.n, r=self.r, rows=tuple(rows), shape=self.shape)


def shift(x: ColumnMatrix) -> ColumnMatrix:
    """Sort every row of ``x`` into nonincreasing order."""
    # sorted() is stable; ties are value ties, so output does not depend on it.
    return ColumnMatrix.from_rows([sorted(row, reverse=True) for row in x.rows])


def sco_objective(c: CostMatrix, x: ColumnMatrix) -> int:
    """Shifted objective ``c . shift(x)``."""
    if c.n != x.n or c.r != x.r:
        raise DimensionMismatch(
            f"cost is {c.n}x{c.r} but solution is {x.n}x{x.r}")
    total = 0
    for i, row in enumerate(shift(x).rows):
        for k, value in enumerate(row, start=1):
            if value:
                total += c.entry(i, k) * value
    return checked(total)


def _row_shape(row: Sequence[int]) -> tuple[bool, bool]:
    nonincreasing = all(a >= b for a, b in zip(row, row[1:]))
    nondecreasing = all(a <= b for a, b in zip(row, row[1:]))
    return nonincreasing, nondecreasing


def shiftedness(c: CostMatrix, cap: int = MATERIALIZATION_CAP) -> Shape:
    """Classify ``c`` as shifted (rows nonincreasing), anti-shifted, or neither.

    Constant rows satisfy both conditions; such matrices report ``SHIFTED``.
    Partial-sums matrices with ``r`` above ``cap`` cannot be scanned and must
    carry a declared ``shape``.
    """
    if not c.explicit and c.r > cap:
        if c.shape is None:
            raise CapExceeded(
                f"cannot classify a partial-sums matrix with r={c.r} > {cap} "
                "without a declared shape")
        return c.shape
    rows = c.materialize(cap).rows
    shapes = [_row_shape(row) for row in rows]
    if all(ni for ni, _ in shapes):
        return Shape.SHIFTED
    if all(nd for _, nd in shapes):
        return Shape.ANTI_SHIFTED
    return Shape.NEITHER


class WeightFunctions:
    """Per-row prefix sums ``w_i(k) = c_i^1 + ... + c_i^k`` for ``k = 0..r``.

    Explicit matrices are tabulated eagerly. Partial-sums matrices are wrapped
    lazily: values are fetched from ``gamma`` on demand and memoized.
    """

    def __init__(self, c: CostMatrix):
        self.n = c.n
        self.r = c.r
        self._c = c
        if c.explicit:
            tables = []
            for row in c.rows:
                acc = [0]
                for v in row:
                    acc.append(checked(acc[-1] + v))
                tables.append(tuple(acc))
            self._tables: tuple[tuple[int, ...], ...] | None = tuple(tables)
        else:
            self._tables = None
            self._lookup = lru_cache(maxsize=None)(c.partial_sum)

    @property
    def explicit(self) -> bool:
        return self._tables is not None

    def __call__(self, i: int, k: int) -> int:
        if self._tables is not None:
            return self._tables[i][k]
        return self._lookup(i, k)

    def table(self, i: int, cap: int = MATERIALIZATION_CAP) -> tuple[int, ...]:
        if self._tables is not None:
            return self._tables[i]
        if self.r > cap:
            raise CapExceeded(f"r={self.r} exceeds materialization cap {cap}")
        return tuple(self(i, k) for k in range(self.r + 1))

    def breakpoints(self, i: int) -> list[int]:
        """Integer points where the piecewise-linear interpolant of ``w_i`` bends.

        Always contains 0 and r. Explicit rows are scanned; oracle rows are
        bisected, which is exact for concave rows and needs
        O(#breakpoints * log r) lookups.
        """
        r = self.r
        if r == 1:
            return [0, 1]
        if self._tables is not None:
            row = self._c.rows[i]
            inner = [k for k in range(1, r) if row[k] != row[k - 1]]
            return [0, *inner, r]
        points = {0, r}

        def slope(k):  # slope on [k, k+1]
            return self(i, k + 1) - self(i, k)

        stack = [(0, r)]
        while stack:
            a, b = stack.pop()
            if b - a <= 1:
                continue
            left, right = slope(a), slope(b - 1)
            if left == right:
                continue
            if left < right:
                raise NotShifted(f"row {i} partial sums are not concave on [{a}, {b}]")
            mid = (a + b) // 2
            points.add(mid)
            stack.append((a, mid))
            stack.append((mid, b))
        ordered = sorted(points)
        # keep only points where the slope genuinely changes
        kept = [ordered[0]]
        for prev, cur, nxt in zip(ordered, ordered[1:], ordered[2:]):
            if (self(i, cur) - self(i, prev)) * (nxt - cur) != (self(i, nxt) - self(i, cur)) * (cur - prev):
                kept.append(cur)
        kept.append(ordered[-1])
        return kept


def weight_functions(c: CostMatrix) -> WeightFunctions:
    return WeightFunctions(c)
