"""
A restriction language with four periodic parts
===============================================

Word counts of a union of four period-two constraint families and the
growth rate they settle on.
"""
import math

import numpy as np

from shiftlab.shifts import count_words_1d, einsiedler_restriction

R = einsiedler_restriction()
ns = np.arange(1, 13)
counts = np.array([count_words_1d(R, 2 * n) for n in ns])
print(counts)

# each part alone has about 2^n words of length 2n; the union has 5 * 2^n - 6
print(np.all(counts == 5 * 2 ** ns - 6))

# ln(count) / 2n approaches ln 2 / 2 only slowly, the increments get there at once
rate = np.log(counts) / (2 * ns)
step = np.diff(np.log(counts)) / 2
print(np.round(rate, 4))
print(np.round(step, 4), round(math.log(2) / 2, 4))
