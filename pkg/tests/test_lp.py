from fractions import Fraction

import pytest

from shiftopt import CostMatrix, ExplicitInstance, solve_enum
from shiftopt.explicit import relaxation
from shiftopt.lp import ConcaveProgram, ConcaveTerm, LpStatus, linprog_max, lp_max


def test_textbook_lp():
    res = linprog_max([3, 5], A_ub=[[1, 0], [0, 2], [3, 2]], b_ub=[4, 12, 18])
    assert res.status is LpStatus.OPTIMAL
    assert res.value == 36
    assert res.point == (2, 6)


def test_free_and_bounded_variables():
    # max x - y with x in [-3, 2], y free but y >= x - 1 -> x=2, y=1
    res = linprog_max([1, -1], A_ub=[[1, -1]], b_ub=[1], bounds=[(-3, 2), (None, None)])
    assert res.status is LpStatus.OPTIMAL and res.value == 1


def test_infeasible_and_unbounded():
    assert linprog_max([1], A_eq=[[1], [1]], b_eq=[1, 2]).status is LpStatus.INFEASIBLE
    assert linprog_max([1, 0], A_ub=[[-1, 1]], b_ub=[0]).status is LpStatus.UNBOUNDED


def test_symmetric_crossing():
    # max min(g, 2 - g) over 0 <= g <= 2
    tent = ConcaveTerm(Fraction(1), {0: Fraction(1)}, ((0, 0), (1, 1), (2, 0)))
    res = lp_max(ConcaveProgram(1, bounds=[(0, 2)], terms=[tent]))
    assert res.status is LpStatus.OPTIMAL
    assert res.value == 1 and res.point[0] == 1


def test_contradictory_equalities():
    p = ConcaveProgram(1, bounds=[(0, 5)], equalities=[({0: 1}, 1), ({0: 1}, 2)])
    assert lp_max(p).status is LpStatus.INFEASIBLE


def test_nonconcave_term_rejected():
    cup = ConcaveTerm(Fraction(1), {0: Fraction(1)}, ((0, 0), (1, 0), (2, 1)))
    with pytest.raises(ValueError):
        lp_max(ConcaveProgram(1, bounds=[(0, 2)], terms=[cup]))


def test_relaxation_bound_is_tight_on_example():
    inst = ExplicitInstance(((2,), (1,), (0,)), CostMatrix.from_rows([[3, 1, 0]]))
    res = lp_max(relaxation(inst))
    assert res.value == 8 == solve_enum(inst).objective


def test_relaxation_is_an_upper_bound():
    import random
    from helpers import random_explicit
    rng = random.Random(11)
    for _ in range(60):
        inst = random_explicit(rng, n_max=3, m_max=4, r_max=4, shape="shifted")
        prog = relaxation(inst)
        res = lp_max(prog)
        best = solve_enum(inst).objective
        assert res.value >= best
        assert prog.evaluate(res.point) == res.value
        if all(v.denominator == 1 for v in res.point):
            assert res.value == best
