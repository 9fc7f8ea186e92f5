"""
Light cones of one-dimensional rules
====================================

Width functions W+(k), W-(k) of an iterated local rule, their slopes, and
how a twist by the shift tilts them.
"""
import numpy as np

from shiftlab.config import builtin
from shiftlab.spacetime import (Spacetime, ledrappier_spacetime,
                                light_cone_levels, linear_widths, normalize_spacetime, table_rule, twist,
                                width_table)

led = ledrappier_spacetime()

# for y -> y + sigma(y) the k-th iterate reads binomial(k, i) mod 2 at offset i
t = width_table(led, 8)
print("W+:", t.plus)
print("W-:", t.minus)
print("alpha+ =", t.alpha_plus.value, "alpha- =", t.alpha_minus.value)

# dependency analysis agrees and goes further cheaply
print([linear_widths(led, k) for k in (16, 32, 64)])

# twisting by sigma^p shifts both widths by -p k
for p in (-1, 1):
    tw = width_table(twist(led, p), 6)
    print(p, np.array(tw.plus) - np.array(t.plus[:7]))

# the cone between the two slopes, as integer levels
print(light_cone_levels(led, range(-3, 4)))

# a rule whose cone needs recoding before it sits in a coordinate sector
delayed = builtin("delayed-ledrappier")
norm = normalize_spacetime(delayed, 3, max_height=1)
print("strip height", norm.strip_height, "plus", norm.table.plus)

# AND has a cone but no closing certificate, so no normal form is offered
AND = Spacetime(table_rule(2, 0, 1, lambda w: w[0] & w[1]), name="and")
print(width_table(AND, 5).plus)
