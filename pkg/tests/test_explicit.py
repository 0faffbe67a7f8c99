import itertools
import random

import pytest

from helpers import direct_objective, random_explicit
from shiftopt import (CapExceeded, Composition, CostMatrix, DimensionMismatch, ExplicitInstance,
                      LinOptOracle, NotShifted, OracleProtocolError, Shape, Status, brute_force_tuples,
                      count_compositions, f_eval, sco_objective, shiftedness, solve_auto,
                      solve_concave, solve_enum, solve_linopt_oracle, solve_vertex)
from shiftopt.explicit import _compositions


def scalar_instance():
    return ExplicitInstance(((2,), (1,), (0,)), CostMatrix.from_rows([[3, 1, 0]]))


def test_f_eval_examples():
    inst = scalar_instance()
    assert f_eval(inst, (1, 1, 1)) == 7
    assert f_eval(inst, (3, 0, 0)) == 8
    assert f_eval(inst, (0, 0, 3)) == 0
    with pytest.raises(DimensionMismatch):
        f_eval(inst, (1, 1))
    with pytest.raises(DimensionMismatch):
        f_eval(inst, (1, 1, 0))


def test_duplicates_rejected():
    with pytest.raises(ValueError):
        ExplicitInstance(((1, 0), (1, 0)), CostMatrix.from_rows([[1], [1]]))


def test_composition_count_and_order():
    assert count_compositions(3, 2) == 4
    assert [tuple(c) for c in _compositions(3, 2).tolist()] == [(0, 3), (1, 2), (2, 1), (3, 0)]
    for r, m in [(0, 3), (4, 1), (5, 3)]:
        comps = [tuple(c) for c in _compositions(r, m).tolist()]
        assert comps == sorted(t for t in itertools.product(range(r + 1), repeat=m) if sum(t) == r)


def test_scalar_example_all_solvers():
    inst = scalar_instance()
    # (2,0,1), (2,1,0) and (3,0,0) all reach 8; the lexicographic rule picks (2,0,1)
    optimal = [c for c in _compositions(3, 3).tolist() if f_eval(inst, c) == 8]
    assert sorted(map(tuple, optimal)) == [(2, 0, 1), (2, 1, 0), (3, 0, 0)]
    for solver in (solve_enum, solve_concave, brute_force_tuples, solve_auto):
        res = solver(inst)
        assert res.status is Status.OPTIMAL
        assert (res.objective, res.witness.parts) == (8, (2, 0, 1))


def test_mixing_beats_pure_choices():
    inst = ExplicitInstance(((1, 0), (0, 1)), CostMatrix.from_rows([[1, 0], [1, 0]]))
    assert (solve_enum(inst).objective, solve_enum(inst).witness.parts) == (2, (1, 1))
    assert (solve_concave(inst).objective, solve_concave(inst).witness.parts) == (2, (1, 1))


def test_brute_force_examples():
    S = ((1, 1, 0), (1, 1, 1), (0, 1, 1))
    inst = ExplicitInstance(S, CostMatrix.from_rows([[1], [1], [1]]))
    assert brute_force_tuples(inst).objective == 3
    single = ExplicitInstance(((2, -1),), CostMatrix.from_rows([[1, 0, 2], [3, -1, 0]]))
    res = brute_force_tuples(single)
    assert res.objective == direct_objective([[1, 0, 2], [3, -1, 0]], [(2, -1)] * 3)
    with pytest.raises(CapExceeded):
        brute_force_tuples(scalar_instance(), cap=10)
    with pytest.raises(CapExceeded):
        solve_enum(scalar_instance(), cap=3)


def test_big_r_oracle_rows():
    gamma = lambda i, j: min(j, 5) - max(0, j - 5)
    for r, expect in [(100, (5, 95)), (10**6, (5, 10**6 - 5))]:
        c = CostMatrix.from_partial_sums(1, r, gamma, shape=Shape.SHIFTED)
        res = solve_concave(ExplicitInstance(((1,), (0,)), c))
        assert res.objective == 5 and res.witness.parts == expect


def test_solve_concave_rejects_unshifted():
    inst = ExplicitInstance(((1,), (0,)), CostMatrix.from_rows([[0, 1]]))
    with pytest.raises(NotShifted):
        solve_concave(inst)
    with pytest.raises(NotShifted):
        solve_vertex(ExplicitInstance(((1,), (0,)), CostMatrix.from_rows([[1, 0]])))


def test_vertex_examples():
    inst = ExplicitInstance(((1, 1), (1, 0)), CostMatrix.from_rows([[0, 2], [0, 2]]))
    res = solve_vertex(inst)
    assert (res.objective, res.witness.parts) == (4, (2, 0))
    tie = ExplicitInstance(((1, 0), (0, 1)), CostMatrix.from_rows([[0, 1], [0, 1]]))
    res = solve_vertex(tie)
    assert (res.objective, res.witness.parts) == (1, (2, 0))


def test_oracle_examples():
    c = CostMatrix.from_rows([[0, 2], [0, 2]])
    sol = solve_linopt_oracle(LinOptOracle.from_set([(1, 1), (1, 0)]), c, 2)
    assert sol.status is Status.OPTIMAL and sol.objective == 4
    assert sol.columns.columns == ((1, 1), (1, 1))
    assert sco_objective(c, sol.columns) == 4
    assert solve_linopt_oracle(lambda w: Status.INFEASIBLE, c).status is Status.INFEASIBLE
    assert solve_linopt_oracle(lambda w: Status.UNBOUNDED, c).status is Status.UNBOUNDED


def test_oracle_protocol_checks():
    c = CostMatrix.from_rows([[0, 2], [0, 2]])
    liar = LinOptOracle(lambda w: (5, 5), member={(1, 1)}.__contains__)
    with pytest.raises(OracleProtocolError):
        solve_linopt_oracle(liar, c)
    with pytest.raises(OracleProtocolError):
        solve_linopt_oracle(lambda w: (1,), c)
    with pytest.raises(NotShifted):
        solve_linopt_oracle(lambda w: (1, 1), CostMatrix.from_rows([[2, 0], [0, 0]]))
    with pytest.raises(DimensionMismatch):
        solve_linopt_oracle(lambda w: (1, 1), c, r=3)


def test_auto_dispatch():
    rng = random.Random(5)
    seen = set()
    for _ in range(150):
        inst = random_explicit(rng, n_max=3, m_max=4, r_max=3)
        shape = shiftedness(inst.c)
        seen.add(shape)
        expected = {Shape.SHIFTED: solve_concave, Shape.ANTI_SHIFTED: solve_vertex,
                    Shape.NEITHER: solve_enum}[shape](inst)
        assert solve_auto(inst) == expected
    assert seen == set(Shape)


def test_midpoint_concavity_for_shifted_costs():
    rng = random.Random(9)
    for _ in range(200):
        inst = random_explicit(rng, n_max=4, m_max=4, r_max=6, shape="shifted")
        comps = _compositions(inst.r, inst.m).tolist()
        p, q = rng.choice(comps), rng.choice(comps)
        if all((a + b) % 2 == 0 for a, b in zip(p, q)):
            mid = [(a + b) // 2 for a, b in zip(p, q)]
            assert f_eval(inst, p) + f_eval(inst, q) <= 2 * f_eval(inst, mid)


def test_witness_attains_objective():
    rng = random.Random(13)
    for _ in range(100):
        inst = random_explicit(rng, n_max=4, m_max=5, r_max=4)
        res = solve_auto(inst)
        x = inst.materialize(res.witness)
        assert f_eval(inst, res.witness) == res.objective == sco_objective(inst.c, x)


def test_composition_validation():
    with pytest.raises(ValueError):
        Composition((1, -1))
