"""Exact rational linear programming and concave piecewise-linear programs.

The simplex kernel works on :class:`fractions.Fraction` tableaus and uses
Bland's rule throughout, so it cannot cycle and returns bounds with no
rounding tolerance. It is meant for the small relaxations built by the
branch-and-bound solver, not as a general purpose LP code.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class _Tableau:
    """Dense tableau ``[A | b]`` with a reduced-profit row, maximizing."""

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.profit: list[Fraction] = [Fraction(0)] * ncols
        self.neg_value = Fraction(0)

    def set_objective(self, cost: Sequence[Fraction]):
        profit = list(cost)
        neg_value = Fraction(0)
        for row, b, j in zip(self.rows, self.rhs, self.basis):
            cb = cost[j]
            if cb:
                for k, a in enumerate(row):
                    if a:
                        profit[k] -= cb * a
                neg_value -= cb * b
        self.profit = profit
        self.neg_value = neg_value

    @property
    def value(self) -> Fraction:
        return -self.neg_value

    def pivot(self, r: int, c: int):
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            prow = [a / piv for a in prow]
            self.rows[r] = prow
            self.rhs[r] = self.rhs[r] / piv
        nz = [k for k, a in enumerate(prow) if a]
        pb = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
                self.rhs[i] -= f * pb
        f = self.profit[c]
        if f:
            for k in nz:
                self.profit[k] -= f * prow[k]
            self.neg_value -= f * pb
        self.basis[r] = c

    def optimize(self, allowed: int) -> bool:
        """Run Bland's rule over columns ``< allowed``; False if unbounded."""
        while True:
            enter = next((j for j in range(allowed) if self.profit[j] > 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter)


def linprog_max(objective: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
                bounds: Sequence[tuple] | None = None) -> LpResult:
    """Maximize ``objective . x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    ``bounds`` is a list of ``(lo, hi)`` pairs; ``None`` means infinite. The
    default is ``x >= 0``. All data are converted to exact fractions.
    """
    nvar = len(objective)
    if bounds is None:
        bounds = [(0, None)] * nvar
    cost = [_frac(v) for v in objective]

    # x_j = offset_j + sign_j * y[cols_j[0]] (- y[cols_j[1]] for free variables)
    ny = 0
    maps = []
    for lo, hi in bounds:
        lo = None if lo is None else _frac(lo)
        hi = None if hi is None else _frac(hi)
        if lo is not None and hi is not None and lo > hi:
            return LpResult(LpStatus.INFEASIBLE)
        if lo is not None:
            maps.append((lo, 1, (ny,), None if hi is None else hi - lo))
            ny += 1
        elif hi is not None:
            maps.append((hi, -1, (ny,), None))
            ny += 1
        else:
            maps.append((Fraction(0), 1, (ny, ny + 1), None))
            ny += 2

    def translate(coeffs, rhs):
        row = [Fraction(0)] * ny
        rhs = _frac(rhs)
        for j, a in enumerate(coeffs):
            a = _frac(a)
            if not a:
                continue
            off, sign, cols, _ = maps[j]
            rhs -= a * off
            row[cols[0]] += sign * a
            if len(cols) == 2:
                row[cols[1]] -= a
        return row, rhs

    constraints = []  # (row over y, rhs, is_equality)
    for coeffs, b in zip(A_ub, b_ub):
        row, rhs = translate(coeffs, b)
        constraints.append((row, rhs, False))
    for coeffs, b in zip(A_eq, b_eq):
        row, rhs = translate(coeffs, b)
        constraints.append((row, rhs, True))
    for off, sign, cols, width in maps:
        if width is not None:
            row = [Fraction(0)] * ny
            row[cols[0]] = Fraction(1)
            constraints.append((row, width, False))

    y_cost = [Fraction(0)] * ny
    const = Fraction(0)
    for j, cj in enumerate(cost):
        off, sign, cols, _ = maps[j]
        const += cj * off
        y_cost[cols[0]] += sign * cj
        if len(cols) == 2:
            y_cost[cols[1]] -= cj

    nslack = sum(1 for _, _, eq in constraints if not eq)
    need_art = [eq or rhs < 0 for _, rhs, eq in constraints]
    nart = sum(need_art)
    ncols = ny + nslack + nart
    rows, rhs_col, basis = [], [], []
    s_idx, a_idx = ny, ny + nslack
    for (row, rhs, eq), art in zip(constraints, need_art):
        full = row + [Fraction(0)] * (nslack + nart)
        if not eq:
            full[s_idx] = Fraction(1)
            slack = s_idx
            s_idx += 1
        if rhs < 0:
            full = [-a for a in full]
            rhs = -rhs
        if art:
            full[a_idx] = Fraction(1)
            basis.append(a_idx)
            a_idx += 1
        else:
            basis.append(slack)
        rows.append(full)
        rhs_col.append(rhs)

    tab = _Tableau(rows, rhs_col, basis, ncols)
    first_art = ny + nslack
    if nart:
        tab.set_objective([Fraction(0)] * first_art + [Fraction(-1)] * nart)
        tab.optimize(ncols)
        if tab.value < 0:
            return LpResult(LpStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                col = next((k for k in range(first_art) if tab.rows[i][k]), None)
                if col is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1
        for row in tab.rows:
            del row[first_art:]
        tab.ncols = first_art
    tab.set_objective(y_cost + [Fraction(0)] * nslack)
    if not tab.optimize(first_art):
        return LpResult(LpStatus.UNBOUNDED)

    y = [Fraction(0)] * ny
    for b, j in zip(tab.rhs, tab.basis):
        if j < ny:
            y[j] = b
    x = []
    for off, sign, cols, _ in maps:
        v = off + sign * y[cols[0]]
        if len(cols) == 2:
            v -= y[cols[1]]
        x.append(v)
    return LpResult(LpStatus.OPTIMAL, tab.value + const, tuple(x))


@dataclass(frozen=True)
class ConcaveTerm:
    """``weight * phi(arg)`` with ``phi`` the interpolant of ``points``.

    ``arg = sum(coeffs[j] * v_j) + offset``. ``points`` are ``(x, y)`` pairs in
    increasing ``x``; outside their range ``phi`` continues with the end slopes.
    """

    weight: Fraction
    coeffs: Mapping[int, Fraction]
    points: tuple[tuple[Fraction, Fraction], ...]
    offset: Fraction = Fraction(0)

    def slopes(self) -> list[Fraction]:
        pts = self.points
        return [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:])]


@dataclass
class ConcaveProgram:
    """Maximize ``linear . v + constant + sum of concave terms`` over a polyhedron.

    Variables carry ``(lo, hi)`` bounds (``None`` for infinite); ``equalities``
    is a list of ``(coeffs, rhs)`` with ``coeffs`` a sparse mapping.
    """

    num_vars: int
    bounds: list[tuple] = field(default_factory=list)
    equalities: list[tuple[Mapping[int, Fraction], Fraction]] = field(default_factory=list)
    terms: list[ConcaveTerm] = field(default_factory=list)
    linear: dict[int, Fraction] = field(default_factory=dict)
    constant: Fraction = Fraction(0)

    def evaluate(self, point: Sequence) -> Fraction:
        total = _frac(self.constant) + sum(_frac(a) * _frac(point[j]) for j, a in self.linear.items())
        for term in self.terms:
            arg = term.offset + sum(_frac(a) * _frac(point[j]) for j, a in term.coeffs.items())
            total += term.weight * _interpolate(term.points, arg)
        return total


def _interpolate(points, arg) -> Fraction:
    if len(points) == 1:
        return _frac(points[0][1])
    seg = 0
    while seg < len(points) - 2 and arg > points[seg + 1][0]:
        seg += 1
    (x0, y0), (x1, y1) = points[seg], points[seg + 1]
    return y0 + (y1 - y0) * (arg - x0) / (x1 - x0)


def lp_max(p: ConcaveProgram) -> LpResult:
    """Exact optimum of ``p`` over its continuous feasible region.

    Each concave term becomes an epigraph variable bounded above by every
    segment's supporting line. Raises ``ValueError`` when a term's slopes
    increase (the term is not concave) or its weight is negative.
    """
    n = p.num_vars
    bounds = list(p.bounds) if p.bounds else [(None, None)] * n
    if len(bounds) != n:
        raise ValueError("bounds length does not match num_vars")
    linear = {j: _frac(a) for j, a in p.linear.items()}
    epi_terms = []
    for term in p.terms:
        if term.weight < 0:
            raise ValueError("concave term weights must be nonnegative")
        if not term.points:
            raise ValueError("concave term needs at least one breakpoint")
        xs = [x for x, _ in term.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        slopes = term.slopes()
        if any(b > a for a, b in zip(slopes, slopes[1:])):
            raise ValueError("breakpoint slopes increase: term is not concave")
        if term.weight == 0:
            continue
        epi_terms.append(term)

    total = n + len(epi_terms)
    obj = [Fraction(0)] * total
    for j, a in linear.items():
        obj[j] += a
    A_ub, b_ub = [], []
    for t, term in enumerate(epi_terms):
        z = n + t
        obj[z] = _frac(term.weight)
        pts = term.points
        if len(pts) == 1:
            row = [Fraction(0)] * total
            row[z] = Fraction(1)
            A_ub.append(row)
            b_ub.append(_frac(pts[0][1]))
            continue
        for (x0, y0), slope in zip(pts, term.slopes()):
            # z <= y0 + slope * (arg - x0)
            row = [Fraction(0)] * total
            row[z] = Fraction(1)
            for j, a in term.coeffs.items():
                row[j] -= slope * _frac(a)
            A_ub.append(row)
            b_ub.append(_frac(y0) + slope * (term.offset - _frac(x0)))
    A_eq, b_eq = [], []
    for coeffs, rhs in p.equalities:
        row = [Fraction(0)] * total
        for j, a in coeffs.items():
            row[j] += _frac(a)
        A_eq.append(row)
        b_eq.append(_frac(rhs))
    res = linprog_max(obj, A_ub, b_ub, A_eq, b_eq, bounds + [(None, None)] * len(epi_terms))
    if res.status is not LpStatus.OPTIMAL:
        return res
    return LpResult(LpStatus.OPTIMAL, res.value + _frac(p.constant), res.point[:n])
