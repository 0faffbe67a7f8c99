import random

import pytest

from helpers import atlas_graphs
from shiftopt import Graph, Predicate, build_automaton, decompose, enumerate_sets, integer_points, run_polytope
from shiftopt.catalog import indicator, predicate_check
from shiftopt.graph import complete, cycle, path
from shiftopt.ilp import gaifman_graph
from shiftopt.treedec import TreeDecomposition, min_fill_decomposition, validate_decomposition

IS, DS, VC = Predicate.INDEPENDENT_SET, Predicate.DOMINATING_SET, Predicate.VERTEX_COVER


def test_predicate_examples():
    assert predicate_check(DS, path(3), {1})
    assert not predicate_check(IS, complete(3), {0, 1})
    assert predicate_check(VC, cycle(5), range(5))
    assert not predicate_check(DS, path(3), {0})


def test_enumerate_examples():
    assert enumerate_sets(IS, complete(3)) == [frozenset(), {0}, {1}, {2}]
    assert enumerate_sets(DS, Graph(1)) == [frozenset({0})]
    assert enumerate_sets(VC, complete(2)) == [{0}, {0, 1}, {1}]


def test_run_counts():
    assert build_automaton(IS, complete(3)).count_runs() == 4
    assert build_automaton(DS, path(3)).count_runs() == len(enumerate_sets(DS, path(3))) == 5
    assert build_automaton(IS, Graph(4)).count_runs() == 16


def test_runs_biject_with_sets():
    for g in [path(4), cycle(5), complete(4), Graph(3, [(0, 1)])]:
        for p in Predicate:
            a = build_automaton(p, g)
            chosen = sorted(sorted(a.selected(run)) for run in a.runs())
            assert chosen == sorted(sorted(X) for X in enumerate_sets(p, g))
            assert a.count_runs() == len(chosen)


def test_k3_independent_polytope_points():
    rp = run_polytope(build_automaton(IS, complete(3)))
    pts = list(integer_points(rp.system))
    assert len(pts) == 4
    assert sorted(rp.project(z) for z in pts) == sorted(indicator(X, 3) for X in enumerate_sets(IS, complete(3)))
    assert sorted(pts) == sorted(rp.points())


def test_projection_equals_enumeration_small_atlas():
    for g in atlas_graphs(1, 5):
        for p in Predicate:
            rp = run_polytope(build_automaton(p, g))
            proj = sorted(rp.project(z) for z in integer_points(rp.system))
            assert proj == sorted(indicator(X, g.n) for X in enumerate_sets(p, g))


def local_decomposition(rp):
    """Bags: transitions of a node and of its parent, plus the vertex it forgets."""
    a = rp.automaton
    nice = a.nice
    par = nice.parents()

    def trans(t):
        return set(range(rp.offsets[t], rp.offsets[t] + len(a.nodes[t].transitions)))

    bags = []
    for t, nd in enumerate(nice.nodes):
        bag = trans(t) | (trans(par[t]) if par[t] is not None else set())
        if nd.vertex is not None and nice.forget_node()[nd.vertex] == t:
            bag.add(nd.vertex)
        bags.append(bag)
    return TreeDecomposition(tuple(par), tuple(bags))


def test_gaifman_width_depends_only_on_local_tables():
    for p in Predicate:
        widths = []
        for n in (6, 12, 24):
            rp = run_polytope(build_automaton(p, cycle(n)))
            td = local_decomposition(rp)
            assert validate_decomposition(gaifman_graph(rp.system), td) == []
            widths.append(min_fill_decomposition(gaifman_graph(rp.system)).width)
            assert widths[-1] <= td.width
        # cycles all have width 2; once every bag state is reachable the bound stops growing
        assert td.width == local_decomposition(run_polytope(build_automaton(p, cycle(12)))).width


def test_scaled_decomposition_fuzz():
    rng = random.Random(6)
    for g in [path(3), complete(3), cycle(4)]:
        for p in Predicate:
            rp = run_polytope(build_automaton(p, g))
            pts = rp.points()
            for _ in range(5):
                k = rng.randint(1, 3)
                z = [sum(col) for col in zip(*(rng.choice(pts) for _ in range(k)))]
                for pieces in (decompose(rp, k, z), rp.decompose_scaled(k, z)):
                    assert [sum(col) for col in zip(*pieces)] == z
                    assert all(rp.system.satisfies(q) for q in pieces)


def test_enumerate_cap():
    with pytest.raises(Exception):
        enumerate_sets(IS, Graph(12), cap=100)
