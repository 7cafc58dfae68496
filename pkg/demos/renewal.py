"""
Renewal times and the counting process
======================================

Arrival times T_n and the number of arrivals N_t are generalized inverses of
each other. So T_n / n tends to the mean gap exactly when N_t / t tends to its
reciprocal.
"""

import numpy as np

from rangeproc import (Convention, ProcessSpec, inverse_values, renewal_equivalence_check,
                       simulate_renewal)

for law in ("deterministic:2", "exponential:0.5", "uniform:0:4"):
    spec = ProcessSpec.from_token(f"renewal:{law}", horizon=20_000.0, step=1.0, seed=3)
    r = simulate_renewal(spec)
    gamma = spec.inter_arrival.mean
    rep = renewal_equivalence_check(r, gamma)
    e = rep.estimates
    print(f"{law:>16}: {r.n_arrivals} arrivals, T_n/n = {e['arrival_ratio']:.4f} "
          f"(mean gap {gamma}), N_t/t = {e['count_ratio']:.4f} (1/gap {1 / gamma:.4f})")

# the weak inverse of the counting path hands back every arrival time
n = np.arange(1, 6, dtype=float)
print("first arrivals:      ", r.arrivals.values[1:6])
print("weak inverse of N_t: ", inverse_values(r.counting, n, Convention.WEAK))
