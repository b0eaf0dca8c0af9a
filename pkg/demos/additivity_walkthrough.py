"""Dimension bookkeeping along the double Alfeld construction.

Each step replaces one cell by a finer piece.  When the step is a split and
the top homology of the coarse mesh vanishes, the dimensions add up:

    dim S(fine) = dim S(coarse) + dim S(piece) - dim P_d

The walkthrough prints that table for every step.
"""
from splitsplines.fixtures import construction
from splitsplines.formulas import dim_double_alfeld
from splitsplines.refine import verify_additivity

k, r = 2, 1
records = construction("double-alfeld", k)
for i, rec in enumerate(records, 1):
    print(f"step {i}: {len(rec.coarse.cells)} -> {len(rec.fine.cells)} cells")
    print(verify_additivity(rec, r, range(2, 7)))
    print()

print("closed form for the finished mesh:", [dim_double_alfeld(k, d, r) for d in range(2, 7)])
