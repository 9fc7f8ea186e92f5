"""
Coding polygons of the three-dot shift
======================================

Count patterns, find the nonexpansive directions, build the triangle that
codes the shift, and check that recoding does not disturb any of it.
"""
import numpy as np

from shiftlab.coding import (build_coding_polygon, canonical_recode, codes,
                             enumerate_nonexpansive_candidates, is_closing, verify_coding_polygon)
from shiftlab.geometry import unit_triangle
from shiftlab.shifts import count_colorings, ledrappier, rectangle

led = ledrappier()

# pattern counts on n x m rectangles: the log2 table is n + m - 1
logs = np.array([[count_colorings(led, rectangle(n, m)).bit_length() - 1 for m in range(1, 7)]
                 for n in range(1, 7)])
print(logs)

# two points on a row do not decide the point above-left of them ...
print(codes(led, [(0, 0)], (1, 0), 4).status)
# ... but the corner pair does
print(codes(led, [(0, 0), (1, 0)], (0, 1), 4).status)

# directions whose half plane fails to code anything outside it
rays = enumerate_nonexpansive_candidates(led, 3, 8)
print("nonexpansive:", [r.direction for r in rays])
for r in rays:
    res = is_closing(led, r, 4, 6)
    print(r.direction, res.status, res.n)

# the polygon with those edge directions, smallest multiple that codes
poly, n = build_coding_polygon(led, rays, 3)
print(poly, "multiple", n)
print("2T verifies:", verify_coding_polygon(led, poly.scaled(2)).ok)

# dominoes: same rays, a little more radius
dom = canonical_recode(led, [(0, 0), (1, 0)])
print(len(dom.symbols), "domino letters")
print("T verifies after recoding:", verify_coding_polygon(dom, unit_triangle(), 6).ok)
