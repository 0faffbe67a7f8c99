import itertools

import pytest

from shiftopt import ArithmeticOverflow, Shape, shiftedness, solve_auto, solve_enum
from shiftopt.graph import Graph, complete, cycle, path
from shiftopt.reductions import (MscInstance, WsmInstance, WsmSet, build_lexicographic_objective,
                                 build_vulnerability_objective, domset_to_sco, msc_cost_row, msc_to_sco,
                                 solve_wsm)


def test_domset_examples():
    assert solve_auto(domset_to_sco(path(3), 1)).objective == 3
    assert solve_auto(domset_to_sco(cycle(4), 1)).objective == 3
    assert solve_auto(domset_to_sco(Graph(1), 1)).objective == 1
    inst = domset_to_sco(path(3), 2)
    assert inst.c.rows == ((1, 0),) * 3


def test_domset_dedupes_twins():
    inst = domset_to_sco(complete(3), 1)
    assert inst.m == 1


def test_msc_rows():
    assert msc_cost_row({2}, 2) == (0, 1)
    assert msc_cost_row({1}, 2) == (1, -1)
    inst = MscInstance(1, 2, [{2}], [{0}])
    assert solve_enum(msc_to_sco(inst)).objective == 1
    assert solve_enum(msc_to_sco(MscInstance(1, 2, [{1}], [{0}]))).objective == 0


def test_msc_validation():
    with pytest.raises(ValueError):
        MscInstance(1, 2, [{3}], [{0}])
    with pytest.raises(ValueError):
        MscInstance(1, 2, [{1}], [set()])


def test_vulnerability_objective():
    assert build_vulnerability_objective(2, 3, 2).rows == ((0, -1, 0),) * 2
    assert build_vulnerability_objective(1, 3, 1).rows == ((-1, 0, 0),)
    for r in range(1, 5):
        for k in range(1, r + 1):
            rows = build_vulnerability_objective(2, r, k).rows
            assert all(a >= b for a, b in zip(rows[0], rows[0][1:])) == (k == r)


def test_lexicographic_objective():
    assert build_lexicographic_objective(2, 2).rows == ((-1, -3),) * 2
    assert build_lexicographic_objective(3, 1).rows == ((-1,),) * 3
    assert shiftedness(build_lexicographic_objective(4, 5)) is Shape.SHIFTED
    with pytest.raises(ArithmeticOverflow):
        build_lexicographic_objective(10**6, 5)


def test_wsm_examples():
    one = WsmInstance(1, (2,), (WsmSet({0}, (0, 1, 4)),))
    sol = solve_wsm(one)
    assert (sol.weight, sol.multiplicities) == (4, (2,))
    assert solve_wsm(WsmInstance(1, (2,), (WsmSet({0}, (0, 1)),))) is None
    sol = solve_wsm(WsmInstance(2, (0, 0), (WsmSet({0, 1}, (0, 3)),)))
    assert (sol.weight, sol.multiplicities) == (0, (0,))


def test_wsm_validation():
    with pytest.raises(ValueError):
        WsmSet({0}, (1, 2))
    with pytest.raises(ValueError):
        WsmSet({0}, (0, 3, 4))
    with pytest.raises(ValueError):
        WsmInstance(1, (1,), (WsmSet({0}, (0, 1)), WsmSet({0}, (0, 2))))
