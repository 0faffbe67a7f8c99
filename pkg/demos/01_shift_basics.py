"""Shifting a choice of columns and scoring it.

Three suppliers each serve a subset of four sites. Choosing r suppliers
gives a 0/1 matrix x with one column per choice; its shift sorts each row,
so row i of the shift says how many choices touch site i.
"""
import numpy as np

from shiftopt import ColumnMatrix, CostMatrix, Shape, sco_objective, shift, shiftedness, weight_functions
from shiftopt.reductions import build_lexicographic_objective, build_vulnerability_objective

suppliers = {"north": (1, 1, 0, 0), "east": (0, 1, 1, 0), "hub": (1, 1, 1, 1)}
picked = ["north", "east", "north"]
x = ColumnMatrix(tuple(suppliers[s] for s in picked))

print("chosen columns :", picked)
print("x rows         :", np.array(x.rows).tolist())
print("shift(x) rows  :", np.array(shift(x).rows).tolist())

# Site 1 is served by all three picks: it is 3-vulnerable.
n, r = 4, len(picked)
for k in range(1, r + 1):
    c = build_vulnerability_objective(n, r, k)
    print(f"-(number of {k}-vulnerable sites) =", sco_objective(c, x))

lex = build_lexicographic_objective(n, r)
print("lexicographic rows:", lex.rows[0], "shape:", shiftedness(lex).name)
print("lexicographic score:", sco_objective(lex, x))

# For 0/1 columns only the row sums matter: w_i(sum of row i).
w = weight_functions(lex)
row_sums = np.array(x.rows).sum(axis=1)
print("same score from row sums:", sum(w(i, int(s)) for i, s in enumerate(row_sums)))

assert shiftedness(CostMatrix.from_rows([[0, 1]])) is Shape.ANTI_SHIFTED
