"""Spline dimensions on the Alfeld split, three ways.

The Alfeld split of a triangle cones its boundary over an interior point.
For each smoothness order r we compute dim S^r_d by solving the smoothness
system, by the Euler characteristic of the R/J complex, and by the closed
form, and print them side by side.
"""
from splitsplines import euler_dim, homology_graded_dims
from splitsplines.fixtures import builtin
from splitsplines.formulas import dim_alfeld
from splitsplines.oracle import spline_dim

k = 2
delta = builtin("alfeld", k)
print(f"Alfeld split of T_{k}: {len(delta.vertices)} vertices, {len(delta.cells)} cells\n")

for r in range(3):
    print(f"r = {r}")
    print("   d  oracle  euler  formula")
    for d in range(2 * (r + 2)):
        oracle = spline_dim(delta, r, d, mode="cone")
        print(f"  {d:2d}  {oracle:6d}  {euler_dim(delta, r, d):5d}  {dim_alfeld(k, d, r):7d}")
    print()

# The Euler characteristic only equals the spline dimension when the lower
# homology vanishes.  Check that for the largest degree shown.
d = 2 * (r + 2) - 1
print(f"homology of R/J in degree {d} at r={r}:", homology_graded_dims(delta, r, d))
