import random

import pytest

from helpers import box_min, interval_system, random_system
from shiftopt import (DecomposabilityViolated, DecomposableExtension, IlpSystem, SeparableObjective,
                      SupportTooLarge, decompose, integer_points, separable_min)
from shiftopt.ilp import gaifman_graph, scale_system


def pair_system():
    return IlpSystem(2, [({0: 1, 1: 1}, 1)], [0, 0], [1, 1])


def test_gaifman_examples():
    g = gaifman_graph(IlpSystem(3, [({0: 1, 1: 1}, 1), ({1: 1, 2: 1}, 1)], [0] * 3, [1] * 3))
    assert g.sorted_edges() == [(0, 1), (1, 2)]
    assert len(gaifman_graph(IlpSystem(4, [({j: 1 for j in range(4)}, 2)], [0] * 4, [1] * 4)).edges) == 6
    assert gaifman_graph(IlpSystem(3, [], [0] * 3, [1] * 3)).edges == frozenset()


def test_separable_min_examples():
    sol = separable_min(pair_system(), SeparableObjective((lambda x: x, lambda x: 3 * x)))
    assert (sol.x, sol.value) == ((1, 0), 1)
    assert separable_min(IlpSystem(2, [({0: 1, 1: 1}, 3)], [0, 0], [1, 1])) is None
    assert separable_min(pair_system()).value == 0


def test_support_cap():
    wide = IlpSystem(20, [({j: 1 for j in range(20)}, 3)], [0] * 20, [1] * 20)
    with pytest.raises(SupportTooLarge):
        separable_min(wide, support_cap=4)


def test_scale_system():
    ext = DecomposableExtension(pair_system(), (0, 1), True)
    s3 = scale_system(ext, 3)
    assert s3.rows == ((((0, 1), (1, 1)), 3),) and s3.upper == (3, 3) and s3.lower == (0, 0)
    assert scale_system(ext, 1) == pair_system()
    assert gaifman_graph(s3) == gaifman_graph(ext.system)
    with pytest.raises(ValueError):
        scale_system(ext, 0)


def test_decompose_examples():
    ext = DecomposableExtension(pair_system(), (0, 1), True)
    assert decompose(ext, 2, (1, 1)) == [(1, 0), (0, 1)]
    assert decompose(ext, 2, (2, 0)) == [(1, 0), (1, 0)]
    assert decompose(ext, 1, (0, 1)) == [(0, 1)]
    with pytest.raises(ValueError):
        decompose(ext, 2, (1, 0))


def test_decompose_reports_false_claims():
    # odd cycle: 2Q contains (1,1,1) but Q has no integer point
    odd = IlpSystem(3, [({0: 1, 1: 1}, 1), ({0: 1, 2: 1}, 1), ({1: 1, 2: 1}, 1)], [0] * 3, [1] * 3)
    ext = DecomposableExtension(odd, (0, 1, 2), True)
    with pytest.raises(DecomposabilityViolated):
        decompose(ext, 2, (1, 1, 1))
    with pytest.raises(DecomposabilityViolated):
        decompose(DecomposableExtension(pair_system(), (0, 1)), 2, (1, 1))


def test_extension_validation():
    with pytest.raises(ValueError):
        DecomposableExtension(IlpSystem(1, [], [0], [2]), (0,))
    with pytest.raises(ValueError):
        DecomposableExtension(pair_system(), (0, 0))


def test_integer_points_matches_box():
    rng = random.Random(3)
    for _ in range(80):
        sys = random_system(rng, max_vars=6)
        import itertools
        box = [x for x in itertools.product(*(range(l, u + 1) for l, u in zip(sys.lower, sys.upper)))
               if sys.satisfies(x)]
        assert list(integer_points(sys)) == box


def test_random_systems_against_box():
    rng = random.Random(8)
    for _ in range(100):
        sys = random_system(rng, max_vars=7)
        f = SeparableObjective(tuple({x: rng.randint(-5, 5) for x in range(l, u + 1)}
                                     for l, u in zip(sys.lower, sys.upper)))
        got, want = separable_min(sys, f), box_min(sys, f)
        if want is None:
            assert got is None
        else:
            assert (got.x, got.value) == want


def test_interval_systems_decompose():
    rng = random.Random(17)
    for _ in range(40):
        sys = interval_system(rng, rng.randint(3, 8), rng.randint(1, 4))
        pts = list(integer_points(sys))
        if not pts:
            continue
        ext = DecomposableExtension(sys, tuple(range(sys.num_vars)), True)
        k = rng.randint(1, 4)
        z = [sum(col) for col in zip(*(rng.choice(pts) for _ in range(k)))]
        pieces = decompose(ext, k, z)
        assert len(pieces) == k
        assert [sum(col) for col in zip(*pieces)] == z
        assert all(sys.satisfies(p) for p in pieces)
