# How the partitioning pipeline grows with the number of parts r.
import math
import time

import networkx as nx
import numpy as np

from shiftopt import Graph, Predicate, build_automaton, run_polytope, solve_sco_extension
from shiftopt.pipeline import build_partition_objective

for name, G in (("P3", nx.path_graph(3)), ("C5", nx.cycle_graph(5)), ("P6", nx.path_graph(6))):
    g = Graph.from_networkx(G)
    ext = run_polytope(build_automaton(Predicate.INDEPENDENT_SET, g))
    rs = [2, 4, 8, 16]
    times = []
    for r in rs:
        t = time.perf_counter()
        solve_sco_extension(ext, build_partition_objective(g.n, r))
        times.append(max(time.perf_counter() - t, 1e-6))
    slope = np.polyfit(np.log(rs), np.log(times), 1)[0]
    print(f"{name}: " + "  ".join(f"r={r}:{t:.3f}s" for r, t in zip(rs, times))
          + f"  log-log slope {slope:.2f}")
print("a bounded slope means time grows like a fixed power of r, not exponentially;"
      f" compare 2^16 = {2**16} with 16^3 = {16**3}")
