"""Graph partitioning through shifted optimization.

Each part of a colouring is an independent set; each part of a domatic
partition is a dominating set. The solver looks for r sets from the family
whose columns partition the vertices, via a run polytope over a tree
decomposition.
"""
import time

import networkx as nx

from shiftopt import Graph, Predicate, chromatic_number, domatic_number, partition_solve
from shiftopt.pipeline import ab_coloring

graphs = {
    "K4": nx.complete_graph(4),
    "C5": nx.cycle_graph(5),
    "Petersen": nx.petersen_graph(),
    "3-prism": nx.circular_ladder_graph(3),
}
for name, G in graphs.items():
    g = Graph.from_networkx(G)
    t = time.perf_counter()
    chi, dom = chromatic_number(g), domatic_number(g)
    print(f"{name:9s} chromatic {chi}  domatic {dom}  ({time.perf_counter() - t:.2f}s)")

c5 = Graph.from_networkx(nx.cycle_graph(5))
print("colour classes of C5:", [sorted(p) for p in partition_solve(Predicate.INDEPENDENT_SET, c5, 3)])
colors = ab_coloring(c5, 5, 2)
print("(5:2)-colouring of C5:", [sorted(cs) for cs in colors])
print("(4:2)-colouring of C5:", ab_coloring(c5, 4, 2))
