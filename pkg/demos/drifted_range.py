"""
Range of Brownian motion with drift
===================================

For Brownian motion with drift eta, the range grows like |eta| t. The first
time the range exceeds a level a grows like a / |eta|. Without drift the range
is only of order sqrt(t), so range / t goes to zero and the first range time
grows faster than linearly.
"""

from rangeproc import (ProcessSpec, inverse_slope_check, normalizer, range_slope_check,
                       running_extrema, simulate)

for token in ("drift:1.5", "drift:-1.0", "bm"):
    spec = ProcessSpec.from_token(token, horizon=2000.0, step=0.01, seed=42)
    path = simulate(spec)
    rep = range_slope_check(path, normalizer("t", path.grid))
    est = rep.estimates
    print(f"{token:>10}: path/t -> {est['path']['tail_mean']:+.3f}, "
          f"range/t -> {est['range']['tail_mean']:.3f}")

    # first range times on a ladder of levels
    eta = spec.eta
    inv = inverse_slope_check(running_extrema(path), expected=abs(eta))
    print(f"{'':>10}  theta(a)/a at the top of the ladder: "
          f"{inv.estimates['top_ratio']:.2f}"
          + (f" (1/|eta| = {1 / abs(eta):.3f})" if eta else " (grows without bound)"))
