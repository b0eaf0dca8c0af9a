"""When does refining one cell count as a split?

An inner triangle sits in a ring of nine others.  The three spokes through
its corners meet at the origin.  Refining the inner triangle at the origin
adds no new slopes at its corners, so nothing changes in the face ideals.
Refining at a generic point does add slopes, and the corners where the ideal
changes are reported as witnesses.
"""
from splitsplines.fixtures import spoke_split
from splitsplines.refine import is_split

for aligned in (True, False):
    rec = spoke_split(aligned)
    label = "at the spoke intersection" if aligned else "at a generic point"
    print(f"Alfeld split of the inner triangle {label}")
    for r in (1, 2, 3):
        ok, witnesses = is_split(rec, r)
        pts = [rec.fine.points(g) for g in witnesses]
        print(f"  r={r}: split={ok}  witnesses={[tuple(map(str, p[0])) for p in pts]}")
    print()

# With 4 or more distinct slopes at a vertex, the ideal of cubes already
# fills degree 3, so at r=2 only a corner with exactly three slopes can
# change.  Here that is the corner (-1, -1).
