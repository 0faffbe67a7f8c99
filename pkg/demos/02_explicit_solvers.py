"""Solving shifted problems over an explicit set with every available method."""
import random
import time

from shiftopt import CostMatrix, ExplicitInstance, Shape, shiftedness
from shiftopt.explicit import SOLVERS, f_eval

rng = random.Random(3)
S = tuple({tuple(rng.randint(0, 3) for _ in range(3)) for _ in range(5)})
rows = [sorted((rng.randint(-4, 6) for _ in range(4)), reverse=True) for _ in range(3)]
inst = ExplicitInstance(S, CostMatrix.from_rows(rows))
print("S =", S)
print("c =", rows, "->", shiftedness(inst.c).name)

for name in ("enum", "concave", "brute", "auto"):
    res = SOLVERS[name](inst)
    print(f"{name:8s} objective {res.objective:4d}  composition {res.witness.parts}")

# The objective of a composition never needs the r columns themselves.
print("f(1,1,1,1,0) =", f_eval(inst, (1, 1, 1, 1, 0)) if inst.m == 5 else "n/a")

# A cost row given only through prefix sums, with a million columns.
gamma = lambda i, j: min(j, 5) - max(0, j - 5)
big = ExplicitInstance(((1,), (0,)), CostMatrix.from_partial_sums(1, 10**6, gamma, shape=Shape.SHIFTED))
t = time.perf_counter()
res = SOLVERS["concave"](big)
print(f"r = 10^6: objective {res.objective}, composition {res.witness.parts}, "
      f"{time.perf_counter() - t:.2f}s")

# Nondecreasing rows: one linear optimization over S suffices.
anti = ExplicitInstance(S, CostMatrix.from_rows([sorted(r) for r in rows]))
print("vertex solver on nondecreasing rows:", SOLVERS["vertex"](anti).objective,
      "= enumeration", SOLVERS["enum"](anti).objective)
