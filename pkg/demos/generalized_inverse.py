"""
Generalized inverses of non-decreasing paths
============================================

A non-decreasing path need not be invertible: it can be flat, or it can
jump. Two generalized inverses still exist. The strict one asks for the
first time the path goes above a level; the weak one asks for the first time
it reaches the level.
"""

import numpy as np

from rangeproc import (Interpolation, InverseQuery, MonotonePath, SampledPath,
                       generalized_inverse, inverse_transform_sample, stream)

# floor(x) on [0, 5] as a right-continuous step path
floor = MonotonePath(SampledPath.from_arrays(np.arange(6.0), np.arange(6.0),
                                             Interpolation.STEP))
for conv in ("strict", "weak"):
    print(conv, "inverse of floor at level 1:",
          generalized_inverse(floor, InverseQuery(1.0, conv)))

# a path that never gets above the level has no answer on the horizon
flat = MonotonePath(SampledPath.from_arrays([0, 1, 2], [0, 0, 0]))
print("flat path, level 1:", generalized_inverse(flat, InverseQuery(1.0)))

# %%
# Inverse transform sampling
# --------------------------
# Feeding uniform numbers through the weak inverse of a distribution
# function gives samples from that distribution. Here: exponential(1),
# tabulated on a fine grid.

x = np.linspace(0, 40, 400_001)
cdf = MonotonePath(SampledPath.from_arrays(x, -np.expm1(-x)))
u = stream(7, 2).random(50_000)
samples = inverse_transform_sample(cdf, u[u > 0])
print(f"sample mean {samples.mean():.4f}, sample variance {samples.var():.4f} (both ~ 1)")
