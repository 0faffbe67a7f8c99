"""Instance generators: dominating set, multidemand set cover, weighted set multicover."""
import networkx as nx

from shiftopt import Graph, solve_auto, solve_enum
from shiftopt.reductions import MscInstance, WsmInstance, WsmSet, domset_to_sco, msc_to_sco, solve_wsm

star = Graph.from_networkx(nx.star_graph(4))
for r in (1, 2):
    inst = domset_to_sco(star, r)
    print(f"star, r={r}: optimum {solve_auto(inst).objective} of n={star.n}")
c6 = Graph.from_networkx(nx.cycle_graph(6))
for r in (1, 2):
    print(f"C6, r={r}: optimum {solve_auto(domset_to_sco(c6, r)).objective} of n=6")

# Two elements, two sets; element 0 must be hit exactly twice, element 1 once or three times.
msc = MscInstance(2, 3, [{2}, {1, 3}], [{0}, {0, 1}, {1}])
res = solve_enum(msc_to_sco(msc))
print("MSC optimum", res.objective, "(2 means solvable), choice", res.witness.parts)

# Weighted set multicover with copies given by cumulative weights.
wsm = WsmInstance(3, (2, 1, 3), (
    WsmSet({0, 1}, (0, 1, 3)),
    WsmSet({2}, (0, 2, 4, 6)),
    WsmSet({0, 2}, (0, 5, 11)),
))
print("WSM:", solve_wsm(wsm))
