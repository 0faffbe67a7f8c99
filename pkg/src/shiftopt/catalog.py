"""Vertex-set predicates as bag automata and run polytopes.

A :class:`BagAutomaton` runs bottom-up over a nice tree decomposition; its
accepting runs are in bijection with the vertex sets satisfying the
predicate. :func:`run_polytope` turns the automaton into a 0/1 flow system
whose integer points are exactly the accepting runs, with one projection
coordinate per vertex. Because the flow lives on a tree, every integer point
of ``k`` times the system is a sum of ``k`` runs, so the system is
decomposable, and :class:`RunPolytope` provides direct optimization and
decomposition oracles for the scaled system.
"""
from __future__ import annotations

import enum
import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .errors import CapExceeded, DecomposabilityViolated
from .graph import Graph
from .ilp import DecomposableExtension, IlpSolution, IlpSystem, SeparableObjective
from .shift import checked
from .treedec import NiceDecomposition, NodeKind, make_nice, min_fill_decomposition, validate_decomposition

ENUMERATE_CAP = 2**20


class Predicate(enum.Enum):
    INDEPENDENT_SET = "indep"
    DOMINATING_SET = "domset"
    VERTEX_COVER = "vcover"


def predicate_check(p: Predicate, g: Graph, X: Iterable[int]) -> bool:
    X = frozenset(X)
    if not X <= set(g.vertices):
        raise ValueError("X must be a subset of the vertices")
    if p is Predicate.INDEPENDENT_SET:
        return not any(u in X and v in X for u, v in g.edges)
    if p is Predicate.VERTEX_COVER:
        return all(u in X or v in X for u, v in g.edges)
    if p is Predicate.DOMINATING_SET:
        return all(v in X or g.neighbors(v) & X for v in g.vertices)
    raise ValueError(f"unknown predicate {p}")


def enumerate_sets(p: Predicate, g: Graph, cap: int = ENUMERATE_CAP) -> list[frozenset[int]]:
    """Every satisfying set, ordered by its sorted vertex tuple."""
    if 2**g.n > cap:
        raise CapExceeded(f"2^{g.n} subsets exceed cap {cap}")
    found = []
    for size in range(g.n + 1):
        for combo in itertools.combinations(range(g.n), size):
            if predicate_check(p, g, combo):
                found.append(combo)
    return [frozenset(c) for c in sorted(found)]


def indicator(X: Iterable[int], n: int) -> tuple[int, ...]:
    X = set(X)
    return tuple(int(v in X) for v in range(n))


# states: (vertices of the bag in X, non-X bag vertices already dominated)
State = tuple[tuple[int, ...], tuple[int, ...]]
_EMPTY: State = ((), ())


@dataclass(frozen=True)
class Transition:
    inputs: tuple[int, ...]  # state index in each child, in child order
    output: int              # state index at this node
    chosen: int | None = None  # vertex recorded as selected (forget nodes only)


@dataclass(frozen=True)
class AutomatonNode:
    states: tuple[State, ...]
    transitions: tuple[Transition, ...]


def _add(t: tuple[int, ...], v: int) -> tuple[int, ...]:
    return tuple(sorted((*t, v)))


def _drop(t: tuple[int, ...], v: int) -> tuple[int, ...]:
    return tuple(u for u in t if u != v)


def _introduce(p: Predicate, g: Graph, bag: tuple[int, ...], v: int, q: State, take: bool):
    X, dom = q
    nb = g.neighbors(v)
    if p is Predicate.INDEPENDENT_SET:
        if take and nb.intersection(X):
            return None
        return (_add(X, v) if take else X, ())
    if p is Predicate.VERTEX_COVER:
        if not take and any(u in nb and u not in X for u in bag if u != v):
            return None
        return (_add(X, v) if take else X, ())
    # dominating set
    if take:
        newly = {u for u in bag if u in nb and u not in X}
        return (_add(X, v), tuple(sorted(set(dom) | newly)))
    if nb.intersection(X):
        return (X, _add(dom, v))
    return (X, dom)


def _forget(p: Predicate, v: int, q: State):
    X, dom = q
    if v in X:
        return (_drop(X, v), dom)
    if p is Predicate.DOMINATING_SET:
        if v not in dom:
            return None
        return (X, _drop(dom, v))
    return q


def _join(q1: State, q2: State):
    if q1[0] != q2[0]:
        return None
    return (q1[0], tuple(sorted(set(q1[1]) | set(q2[1]))))


class BagAutomaton:
    """Deterministic bottom-up automaton over ``nice`` for predicate ``p`` on ``g``.

    Only states that are reachable from the leaves and can still reach the
    accepting root state are kept.
    """

    def __init__(self, p: Predicate, g: Graph, nice: NiceDecomposition):
        problems = validate_decomposition(g, nice.as_tree_decomposition())
        if problems:
            raise ValueError("invalid decomposition: " + "; ".join(map(str, problems)))
        self.predicate = p
        self.graph = g
        self.nice = nice
        raw_states: list[list[State]] = []
        raw_trans: list[list[tuple[tuple[State, ...], State, int | None]]] = []
        for nd in nice.nodes:
            trans = []
            if nd.kind is NodeKind.LEAF:
                trans.append(((), _EMPTY, None))
            elif nd.kind is NodeKind.INTRODUCE:
                for q in raw_states[nd.children[0]]:
                    for take in (False, True):
                        out = _introduce(p, g, nd.bag, nd.vertex, q, take)
                        if out is not None:
                            trans.append(((q,), out, None))
            elif nd.kind is NodeKind.FORGET:
                for q in raw_states[nd.children[0]]:
                    out = _forget(p, nd.vertex, q)
                    if out is not None:
                        trans.append(((q,), out, nd.vertex if nd.vertex in q[0] else None))
            else:
                left, right = (raw_states[c] for c in nd.children)
                by_x = defaultdict(list)
                for q2 in right:
                    by_x[q2[0]].append(q2)
                for q1 in left:
                    for q2 in by_x.get(q1[0], ()):
                        trans.append(((q1, q2), _join(q1, q2), None))
            raw_trans.append(trans)
            raw_states.append(sorted({out for _, out, _ in trans}))
        # backward pass: keep what can reach the accepting root state
        root = nice.root
        useful: list[set[State]] = [set() for _ in nice.nodes]
        useful[root] = {_EMPTY} & set(raw_states[root])
        kept: list[list] = [[] for _ in nice.nodes]
        for t in range(root, -1, -1):
            nd = nice.nodes[t]
            kept[t] = [tr for tr in raw_trans[t] if tr[1] in useful[t]]
            for tr in kept[t]:
                for ch, q in zip(nd.children, tr[0]):
                    useful[ch].add(q)
        nodes = []
        for t, nd in enumerate(nice.nodes):
            states = tuple(sorted(useful[t]))
            index = {q: i for i, q in enumerate(states)}
            child_index = [{q: i for i, q in enumerate(nodes[c].states)} for c in nd.children]
            trans = tuple(sorted(
                (Transition(tuple(ci[q] for ci, q in zip(child_index, ins)), index[out], chosen)
                 for ins, out, chosen in kept[t]),
                key=lambda tr: (tr.inputs, tr.output)))
            nodes.append(AutomatonNode(states, trans))
        self.nodes: tuple[AutomatonNode, ...] = tuple(nodes)

    @property
    def accepts_anything(self) -> bool:
        return bool(self.nodes[-1].transitions)

    def count_runs(self) -> int:
        counts: list[list[int]] = []
        for t, nd in enumerate(self.nice.nodes):
            an = self.nodes[t]
            c = [0] * len(an.states)
            for tr in an.transitions:
                prod = 1
                for ch, q in zip(nd.children, tr.inputs):
                    prod *= counts[ch][q]
                c[tr.output] += prod
            counts.append(c)
        return sum(counts[-1])

    def runs(self) -> Iterable[dict[int, int]]:
        """Every accepting run as a map node -> transition index (small inputs only)."""
        nice = self.nice

        def expand(t: int, state: int):
            nd = nice.nodes[t]
            for d, tr in enumerate(self.nodes[t].transitions):
                if tr.output != state:
                    continue
                partials = [{t: d}]
                for ch, q in zip(nd.children, tr.inputs):
                    partials = [{**a, **b} for a in partials for b in expand(ch, q)]
                yield from partials

        for q in range(len(self.nodes[-1].states)):
            yield from expand(nice.root, q)

    def selected(self, run: dict[int, int]) -> frozenset[int]:
        return frozenset(self.nodes[t].transitions[d].chosen for t, d in run.items()
                         if self.nodes[t].transitions[d].chosen is not None)


def build_automaton(p: Predicate, g: Graph, nice: NiceDecomposition | None = None) -> BagAutomaton:
    if nice is None:
        nice = make_nice(min_fill_decomposition(g), g)
    return BagAutomaton(p, g, nice)


class RunPolytope(DecomposableExtension):
    """Flow formulation of an automaton's accepting runs.

    Variables ``0..n-1`` are the vertex indicators (the projection); the rest
    are one 0/1 variable per (node, transition). Rows: the root transitions sum
    to 1; for each non-root node and state, the transitions producing the state
    carry the same flow as the parent transitions consuming it; each vertex
    indicator equals the flow through transitions that forget it as selected.
    """

    def __init__(self, automaton: BagAutomaton):
        a = automaton
        nice = a.nice
        n = a.graph.n
        offsets = []
        nvar = n
        for an in a.nodes:
            offsets.append(nvar)
            nvar += len(an.transitions)
        parents = nice.parents()
        rows: list[tuple[dict[int, int], int]] = []
        root = nice.root
        rows.append(({offsets[root] + d: 1 for d in range(len(a.nodes[root].transitions))}, 1))
        for t, nd in enumerate(nice.nodes):
            par = parents[t]
            if par is None:
                continue
            slot = nice.nodes[par].children.index(t)
            for q in range(len(a.nodes[t].states)):
                row: dict[int, int] = {}
                for d, tr in enumerate(a.nodes[t].transitions):
                    if tr.output == q:
                        row[offsets[t] + d] = 1
                for d, tr in enumerate(a.nodes[par].transitions):
                    if tr.inputs[slot] == q:
                        row[offsets[par] + d] = row.get(offsets[par] + d, 0) - 1
                rows.append((row, 0))
        forget = nice.forget_node()
        for v in range(n):
            t = forget[v]
            row = {v: 1}
            for d, tr in enumerate(a.nodes[t].transitions):
                if tr.chosen == v:
                    row[offsets[t] + d] = -1
            rows.append((row, 0))
        system = IlpSystem(nvar, rows, [0] * nvar, [1] * nvar)
        labels = tuple([("x", v) for v in range(n)] +
                       [("z", t, d) for t, an in enumerate(a.nodes) for d in range(len(an.transitions))])
        super().__init__(system, tuple(range(n)), True, labels)
        object.__setattr__(self, "automaton", a)
        object.__setattr__(self, "offsets", tuple(offsets))

    def run_vector(self, run: dict[int, int]) -> tuple[int, ...]:
        """The 0/1 point of the system encoding one accepting run."""
        vec = [0] * self.system.num_vars
        for t, d in run.items():
            vec[self.offsets[t] + d] = 1
        for v in self.automaton.selected(run):
            vec[v] = 1
        return tuple(vec)

    def points(self) -> list[tuple[int, ...]]:
        return [self.run_vector(run) for run in self.automaton.runs()]

    # -- oracles for the scaled system -------------------------------------------------

    def optimize_scaled(self, k: int, f: SeparableObjective) -> IlpSolution | None:
        """Minimize ``f`` over integer points of ``kQ``; only projection terms may be nonzero.

        Dynamic programming over the nice decomposition whose states are
        multisets of ``k`` automaton states: an integer point of ``kQ`` is a
        multiset of ``k`` accepting runs.
        """
        a = self.automaton
        nice = a.nice
        n = a.graph.n
        if any(f.funcs[j] is not None for j in range(n, self.system.num_vars)):
            raise ValueError("structured oracle supports objectives on projection coordinates only")
        # per node: key (sorted tuple of k state indices) -> (cost, transition multiset, child keys)
        tables: list[dict | None] = []
        for t, nd in enumerate(nice.nodes):
            an = a.nodes[t]
            table: dict[tuple[int, ...], tuple] = {}

            def offer(key, cost, trans, child_keys):
                cur = table.get(key)
                if cur is None or cost < cur[0] or (cost == cur[0] and (trans, child_keys) < cur[1:]):
                    table[key] = (cost, trans, child_keys)

            if nd.kind is NodeKind.LEAF:
                if an.transitions:
                    offer((an.transitions[0].output,) * k, 0, (0,) * k, ())
            elif nd.kind is NodeKind.JOIN:
                self._join_step(t, k, tables, offer)
            else:
                by_input = defaultdict(list)
                for d, tr in enumerate(an.transitions):
                    by_input[tr.inputs[0]].append(d)
                forgetting = nd.vertex if nd.kind is NodeKind.FORGET else None
                for ckey, (ccost, _, _) in tables[nd.children[0]].items():
                    groups = Counter(ckey)
                    options = []
                    for q, cnt in sorted(groups.items()):
                        ds = by_input.get(q)
                        if not ds:
                            break
                        options.append(list(itertools.combinations_with_replacement(ds, cnt)))
                    else:
                        for combo in itertools.product(*options):
                            trans = tuple(sorted(d for part in combo for d in part))
                            key = tuple(sorted(an.transitions[d].output for d in trans))
                            cost = ccost
                            if forgetting is not None:
                                chosen = sum(1 for d in trans if an.transitions[d].chosen == forgetting)
                                cost += f.term(forgetting, chosen)
                            offer(key, cost, trans, (ckey,))
            tables.append(table)
        root_key = (0,) * k
        if not a.nodes[-1].states or root_key not in tables[-1]:
            return None
        # trace back the transition multiset of every node into a point of kQ
        point = [0] * self.system.num_vars
        stack = [(nice.root, root_key)]
        while stack:
            t, key = stack.pop()
            _, trans, child_keys = tables[t][key]
            an = a.nodes[t]
            for d in trans:
                point[self.offsets[t] + d] += 1
                if an.transitions[d].chosen is not None:
                    point[an.transitions[d].chosen] += 1
            for ch, ck in zip(nice.nodes[t].children, child_keys):
                stack.append((ch, ck))
        value = checked(tables[-1][root_key][0])
        return IlpSolution(tuple(point), value)

    def _join_step(self, t, k, tables, offer):
        a = self.automaton
        nd = a.nice.nodes[t]
        an = a.nodes[t]
        left_t, right_t = nd.children
        lstates, rstates = a.nodes[left_t].states, a.nodes[right_t].states
        pair_to_d = {tr.inputs: d for d, tr in enumerate(an.transitions)}
        compatible = defaultdict(list)
        for (q1, q2) in pair_to_d:
            compatible[q1].append(q2)
        right_by_sig = defaultdict(list)
        for rkey in tables[right_t]:
            right_by_sig[tuple(sorted(rstates[q][0] for q in rkey))].append(rkey)
        for lkey, (lcost, _, _) in tables[left_t].items():
            sig = tuple(sorted(lstates[q][0] for q in lkey))
            for rkey in right_by_sig.get(sig, ()):
                rcost = tables[right_t][rkey][0]
                for trans in _matchings(lkey, Counter(rkey), compatible, pair_to_d):
                    key = tuple(sorted(an.transitions[d].output for d in trans))
                    offer(key, lcost + rcost, trans, (lkey, rkey))

    def decompose_scaled(self, k: int, z: Sequence[int]) -> list[tuple[int, ...]]:
        """Split an integer point of ``kQ`` into ``k`` runs by following the flow."""
        a = self.automaton
        nice = a.nice
        z = tuple(int(v) for v in z)
        from .ilp import scale_system
        if not scale_system(self, k).satisfies(z):
            raise ValueError("z is not an integer point of the scaled system")
        runs: list[dict[int, int]] = [dict() for _ in range(k)]
        # (node, list of (run id, state index at node))
        stack = [(nice.root, [(j, 0) for j in range(k)])]
        while stack:
            t, members = stack.pop()
            an = a.nodes[t]
            supply = []
            for d, tr in enumerate(an.transitions):
                supply.extend([(tr.output, d)] * z[self.offsets[t] + d])
            supply.sort()
            members = sorted(members, key=lambda m: (m[1], m[0]))
            if [q for q, _ in supply] != [q for _, q in members]:
                raise DecomposabilityViolated(f"flow mismatch at node {t}")
            child_members = [[] for _ in nice.nodes[t].children]
            for (run_id, _), (_, d) in zip(members, supply):
                runs[run_id][t] = d
                for slot, q in enumerate(an.transitions[d].inputs):
                    child_members[slot].append((run_id, q))
            for ch, cm in zip(nice.nodes[t].children, child_members):
                stack.append((ch, cm))
        pieces = [self.run_vector(run) for run in runs]
        if tuple(map(sum, zip(*pieces))) != z:
            raise DecomposabilityViolated("runs do not sum to the input point")
        return pieces


def _matchings(lkey, rcount: Counter, compatible, pair_to_d):
    """All transition multisets pairing the left multiset with the right one."""
    out = set()
    lkey = list(lkey)

    def rec(i, remaining: Counter, acc):
        if i == len(lkey):
            out.add(tuple(sorted(acc)))
            return
        q1 = lkey[i]
        for q2 in compatible.get(q1, ()):
            if remaining[q2] > 0:
                remaining[q2] -= 1
                acc.append(pair_to_d[(q1, q2)])
                rec(i + 1, remaining, acc)
                acc.pop()
                remaining[q2] += 1

    rec(0, Counter(rcount), [])
    return sorted(out)


def run_polytope(a: BagAutomaton) -> RunPolytope:
    return RunPolytope(a)
