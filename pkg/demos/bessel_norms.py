"""
Norms of multidimensional Brownian motion
=========================================

The Euclidean norm of an n-dimensional Brownian motion is a Bessel process.
Any p-norm of the coordinates stays of order sqrt(t), so its range is
negligible against t. An Euler scheme for the Bessel equation gives the same
picture.
"""

from rangeproc import ProcessSpec, pnorm_negligibility_check

for token in ("bessel:3", "pnorm:2:0.5", "pnorm:4:inf", "besselsde:3"):
    spec = ProcessSpec.from_token(token, horizon=2000.0, step=0.01, seed=11)
    rep = pnorm_negligibility_check(spec, threshold=0.15)
    print(f"{token:>12}: range/t on the tail = "
          f"{rep.estimates['abs_range_slope']['mean']:.4f} ({rep.verdict})")
