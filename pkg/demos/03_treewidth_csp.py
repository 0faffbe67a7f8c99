# Tree decompositions and a weighted CSP solved by dynamic programming.
import networkx as nx

from shiftopt import CspInstance, Graph, HardConstraint, SoftConstraint, csp_brute, csp_solve
from shiftopt import make_nice, min_fill_decomposition, validate_decomposition
from shiftopt.ilp import IlpSystem, SeparableObjective, gaifman_graph, separable_min

grid = Graph.from_networkx(nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 4)))
td = min_fill_decomposition(grid)
print(f"3x4 grid: {len(td.bags)} bags, width {td.width}, violations {validate_decomposition(grid, td)}")
nice = make_nice(td, grid)
print(f"nice form: {len(nice.nodes)} nodes, same width {nice.width}")

# Three-colour the grid, paying 1 for every use of colour 2 and a
# penalty when two diagonal neighbours share a colour.
n = grid.n
different = [(a, b) for a in range(3) for b in range(3) if a != b]
hard = [HardConstraint((u, v), different) for u, v in grid.sorted_edges()]
soft = [SoftConstraint((v,), {(2,): 1}) for v in grid.vertices]
soft += [SoftConstraint((v, v + 5), lambda t: 3 * (t[0] == t[1])) for v in (0, 1, 2, 4, 5, 6)]
inst = CspInstance([range(3)] * n, hard, soft)
sol = csp_solve(inst)
print("colouring:", sol.assignment, "weight", sol.weight)
small = CspInstance([range(3)] * 6, [h for h in hard if max(h.scope) < 6], [s for s in soft if max(s.scope) < 6])
print("DP equals brute force on the first six cells:", csp_solve(small) == csp_brute(small))

# An integer program whose constraint graph is a path.
rows = [({j: 1, j + 1: 1}, 2) for j in range(7)]
sys = IlpSystem(8, rows, [0] * 8, [2] * 8)
f = SeparableObjective(tuple((lambda x, j=j: (x - j % 3) ** 2) for j in range(8)))
print("Gaifman graph edges:", gaifman_graph(sys).sorted_edges())
print("separable minimum:", separable_min(sys, f))
