"""
Directional entropy and its unit sphere
=======================================

Growth of pattern counts along thickened segments and triangles, and the
hexagon that comes out as the unit ball of the entropy norm.
"""
import math

import numpy as np

from shiftlab.entropy import (dilatation_ratio, directional_entropy, entropy_sphere, girth_formula_check,
                              polygonal_entropy)
from shiftlab.geometry import unit_triangle
from shiftlab.shifts import ledrappier

led = ledrappier()
T = unit_triangle()

dirs = [(1, 0), (0, 1), (1, 1), (-1, 1), (2, 1)]
h = np.array([directional_entropy(led, v).value for v in dirs])
print(np.round(h / math.log(2), 4))

# the increment slopes settle after two scales for a linear rule
est = polygonal_entropy(led, T)
for r, n, s in est.slopes:
    print(r, n, round(s, 6))

for v in dirs[:4]:
    print(v, girth_formula_check(led, T, v).status)

sph = entropy_sphere(led, T)
print(sph.polygon.vertices, "scaled by", round(sph.scale, 4))
print(dilatation_ratio(led, [(1, 0), (0, 1), (1, 1)]).ratio)
