"""
Running extrema and the range of a path
=======================================

The range of a path on [0, t] is its running maximum minus its running
minimum. It starts at zero, never decreases, and does not change when the
path is reflected.
"""

import numpy as np

from rangeproc import (IntegerSequence, SampledPath, connect_dots, discrete_range, evaluate,
                       negate, running_extrema)

# a tiny hand-made path: the range follows the widest excursion so far
p = SampledPath.from_arrays([0, 1, 2, 3], [0, 2, -1, 3])
tr = running_extrema(p)
print("sup  ", tr.sup_path.values)
print("inf  ", tr.inf_path.values)
print("range", tr.range_path.values)

# reflecting the path swaps sup and inf but leaves the range alone
print("same range after negation:",
      np.array_equal(running_extrema(negate(p)).range_path.values, tr.range_path.values))

# %%
# Integer walks: sites visited versus the continuous range
# ---------------------------------------------------------
# For a nearest-neighbour walk the number of distinct sites is max - min + 1.
# Joining the points by straight lines gives a continuous path whose range
# differs from the site count by exactly one.

x = IntegerSequence([0, 1, 0, -1, -2, -1, 0, 1, 2, 3], nearest_neighbor=True)
sites = discrete_range(x).counts
cont = running_extrema(connect_dots(x)).range_path
print("sites visited  ", sites)
print("continuous R_n ", evaluate(cont, np.arange(len(x), dtype=float)))
