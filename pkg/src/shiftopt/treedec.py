"""Tree decompositions: min-fill construction, validation, nice normal form."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidDecomposition
from .graph import Graph


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree given by parent links (``None`` marks the root) with bags."""

    parent: tuple[int | None, ...]
    bags: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(self.parent))
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        if len(self.parent) != len(self.bags):
            raise ValueError("parent and bags must have the same length")

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def roots(self) -> list[int]:
        return [t for t, p in enumerate(self.parent) if p is None]

    def children(self) -> list[list[int]]:
        out = [[] for _ in self.parent]
        for t, p in enumerate(self.parent):
            if p is not None:
                out[p].append(t)
        return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "tree", "vertex", "edge" or "connectivity"
    detail: tuple

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def _tree_violations(td: TreeDecomposition) -> list[Violation]:
    out = []
    roots = td.roots
    if len(roots) != 1:
        out.append(Violation("tree", ("roots", tuple(roots))))
    for t, p in enumerate(td.parent):
        if p is not None and not 0 <= p < len(td.parent):
            out.append(Violation("tree", ("parent out of range", t, p)))
    if out:
        return out
    # every node must reach the root without revisiting a node
    for t in range(len(td.parent)):
        seen, cur = set(), t
        while cur is not None:
            if cur in seen:
                out.append(Violation("tree", ("cycle", t)))
                break
            seen.add(cur)
            cur = td.parent[cur]
    return out


def validate_decomposition(g: Graph, td: TreeDecomposition) -> list[Violation]:
    """All violated decomposition conditions; empty when ``td`` is valid for ``g``."""
    out = _tree_violations(td)
    if out:
        return out
    for v in g.vertices:
        if not any(v in bag for bag in td.bags):
            out.append(Violation("vertex", (v,)))
    for u, v in g.sorted_edges():
        if not any(u in bag and v in bag for bag in td.bags):
            out.append(Violation("edge", (u, v)))
    for v in sorted(set().union(*td.bags)) if td.bags else []:
        holders = [t for t, bag in enumerate(td.bags) if v in bag]
        # occurrences form a subtree iff exactly one holder has a parent outside them
        tops = [t for t in holders if td.parent[t] is None or v not in td.bags[td.parent[t]]]
        if len(tops) != 1:
            out.append(Violation("connectivity", (v, tuple(tops))))
    return out


def min_fill_ordering(g: Graph) -> list[int]:
    """Elimination order by fewest fill edges; ties go to the smallest vertex."""
    adj = [set(a) for a in g.adjacency]
    remaining = set(g.vertices)
    order = []
    while remaining:
        best, best_fill = None, None
        for v in sorted(remaining):
            nb = sorted(adj[v])
            fill = sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
                if fill == 0:
                    break
        nb = adj[best]
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(best)
        remaining.discard(best)
        order.append(best)
    return order


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    if g.n == 0:
        return TreeDecomposition((None,), (frozenset(),))
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adjacency]
    bags = []
    for v in order:
        later = {u for u in adj[v] if pos[u] > pos[v]}
        bags.append(frozenset(later | {v}))
        for a in later:
            adj[a] |= later - {a}
    parent: list[int | None] = []
    for i, v in enumerate(order):
        later = bags[i] - {v}
        parent.append(min(pos[u] for u in later) if later else None)
    # join the components into one tree by chaining their roots
    roots = [i for i, p in enumerate(parent) if p is None]
    for a, b in zip(roots, roots[1:]):
        parent[a] = b
    return TreeDecomposition(tuple(parent), tuple(bags))


def min_fill_decomposition(g: Graph) -> TreeDecomposition:
    """Tree decomposition from the min-fill elimination ordering (heuristic width)."""
    return decomposition_from_ordering(g, min_fill_ordering(g))


class NodeKind(enum.Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: NodeKind
    bag: tuple[int, ...]  # sorted
    children: tuple[int, ...] = ()
    vertex: int | None = None


@dataclass(frozen=True)
class NiceDecomposition:
    """Nice tree decomposition; ``nodes`` are listed children-before-parents.

    The root is the last node and has an empty bag.
    """

    nodes: tuple[NiceNode, ...]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def parents(self) -> list[int | None]:
        par: list[int | None] = [None] * len(self.nodes)
        for t, nd in enumerate(self.nodes):
            for ch in nd.children:
                par[ch] = t
        return par

    def as_tree_decomposition(self) -> TreeDecomposition:
        return TreeDecomposition(tuple(self.parents()), tuple(frozenset(nd.bag) for nd in self.nodes))

    def forget_node(self) -> dict[int, int]:
        return {nd.vertex: t for t, nd in enumerate(self.nodes) if nd.kind is NodeKind.FORGET}


def make_nice(td: TreeDecomposition, g: Graph | None = None) -> NiceDecomposition:
    """Equivalent nice decomposition with the same width.

    Introductions happen in increasing vertex order and forgets in decreasing
    order, so a single bag ``{a, b}`` becomes leaf, +a, +b, -b, -a.
    """
    problems = _tree_violations(td) if g is None else validate_decomposition(g, td)
    if not problems and g is None:
        for v in set().union(*td.bags):
            holders = [t for t, bag in enumerate(td.bags) if v in bag]
            tops = [t for t in holders if td.parent[t] is None or v not in td.bags[td.parent[t]]]
            if len(tops) != 1:
                problems.append(Violation("connectivity", (v, tuple(tops))))
    if problems:
        raise InvalidDecomposition("; ".join(map(str, problems)))

    nodes: list[NiceNode] = []

    def add(kind, bag, children=(), vertex=None):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(children), vertex))
        return len(nodes) - 1

    def morph(top: int, current: frozenset, target: frozenset) -> int:
        for v in sorted(current - target, reverse=True):
            current = current - {v}
            top = add(NodeKind.FORGET, current, (top,), v)
        for v in sorted(target - current):
            current = current | {v}
            top = add(NodeKind.INTRODUCE, current, (top,), v)
        return top

    children = td.children()
    root = td.roots[0]
    top_of: dict[int, int] = {}
    # iterative postorder over the original tree
    stack = [(root, False)]
    while stack:
        t, done = stack.pop()
        if not done:
            stack.append((t, True))
            for ch in reversed(children[t]):
                stack.append((ch, False))
            continue
        bag = td.bags[t]
        if not children[t]:
            top_of[t] = morph(add(NodeKind.LEAF, ()), frozenset(), bag)
            continue
        tops = [morph(top_of[ch], td.bags[ch], bag) for ch in children[t]]
        cur = tops[0]
        for other in tops[1:]:
            cur = add(NodeKind.JOIN, bag, (cur, other))
        top_of[t] = cur
    morph(top_of[root], td.bags[root], frozenset())
    if nodes[-1].bag:
        raise AssertionError("nice root bag must be empty")
    return NiceDecomposition(tuple(nodes))
