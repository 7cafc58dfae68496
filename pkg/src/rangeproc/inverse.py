"""Generalized inverses of non-decreasing paths and the first range time.

Two conventions are supported:

* ``strict``: ``inf{x : xi(x) > y}``, right-continuous in ``y``;
* ``weak``:   ``inf{x : xi(x) >= y}``, left-continuous in ``y``.

On a linear segment the crossing is located on the float64 line itself, by
bisection over the bit pattern, using the same arithmetic as
:func:`rangeproc.paths.evaluate`. The strict inverse is the largest float
``x`` with ``evaluate(x) <= y``; the weak one is the smallest float with
``evaluate(x) >= y``, or the strict value when no float attains ``y``
exactly (so ``weak <= strict`` always). Consequently duality relations such as
``theta(R_t) >= t`` hold exactly, not just up to rounding.

An empty superlevel set on the finite horizon is reported as ``inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .extrema import ExtremaTriple
from .paths import DomainError, Interpolation, SampledPath, TimeGrid, write_csv


class Convention(str, Enum):
    STRICT = "strict"
    WEAK = "weak"


@dataclass(frozen=True, eq=False)
class MonotonePath:
    base: SampledPath
    direction: str = "non_decreasing"

    def __post_init__(self):
        if self.direction != "non_decreasing":
            raise DomainError("only non-decreasing paths are supported")
        d = np.diff(self.base.values)
        if np.any(d < 0):
            k = int(np.argmax(d < 0))
            raise DomainError(f"path decreases between knots {k} and {k + 1}")

    @property
    def times(self) -> np.ndarray:
        return self.base.times

    @property
    def values(self) -> np.ndarray:
        return self.base.values

    @property
    def horizon(self) -> float:
        return self.base.horizon

    def jump_times(self) -> np.ndarray:
        """Discontinuity locations (step paths only; linear paths are continuous)."""
        if self.base.interpolation is not Interpolation.STEP:
            return np.empty(0)
        v = self.values
        return self.times[1:][v[1:] != v[:-1]]


@dataclass(frozen=True)
class InverseQuery:
    level: float
    convention: Convention = Convention.STRICT

    def __post_init__(self):
        if not math.isfinite(self.level):
            raise DomainError("inverse level must be finite")
        object.__setattr__(self, "convention", Convention(self.convention))


@dataclass(frozen=True)
class FirstRangeTime:
    a: float
    time: float | None
    horizon: float

    @property
    def saturated(self) -> bool:
        return self.time is None

    @property
    def value(self) -> float:
        return math.inf if self.time is None else self.time


def _as_monotone(xi) -> MonotonePath:
    return xi if isinstance(xi, MonotonePath) else MonotonePath(xi)


def _segment_eval(x, t0, t1, v0, v1):
    # identical arithmetic to paths.evaluate on [t0, t1]
    w = (x - t0) / (t1 - t0)
    out = np.clip(v0 + w * (v1 - v0), v0, v1)
    return np.where(x == t1, v1, out)


def _bisect_floats(lo, hi, below):
    """Shrink ``[lo, hi]`` to adjacent floats keeping ``below(lo)`` true and
    ``below(hi)`` false. Requires ``0 <= lo <= hi``."""
    li = np.ascontiguousarray(lo, dtype=np.float64).view(np.int64).copy()
    hi_ = np.ascontiguousarray(hi, dtype=np.float64).view(np.int64).copy()
    for _ in range(70):
        gap = hi_ - li
        active = gap > 1
        if not np.any(active):
            break
        mid = li + gap // 2
        ok = below(mid.view(np.float64))
        li = np.where(active & ok, mid, li)
        hi_ = np.where(active & ~ok, mid, hi_)
    return li.view(np.float64), hi_.view(np.float64)


def inverse_values(xi, levels, convention=Convention.STRICT) -> np.ndarray:
    """Vectorized generalized inverse; ``inf`` marks an empty level set."""
    xi = _as_monotone(xi)
    convention = Convention(convention)
    t, v = xi.times, xi.values
    y = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    if not np.all(np.isfinite(y)):
        raise DomainError("inverse levels must be finite")
    side = "right" if convention is Convention.STRICT else "left"
    # first knot whose value exceeds (strict) or reaches (weak) the level
    j = np.searchsorted(v, y, side=side)
    out = np.full(y.shape, np.inf)
    found = j < v.size
    out[found & (j == 0)] = 0.0
    inner = found & (j > 0)
    if xi.base.interpolation is Interpolation.STEP:
        out[inner] = t[j[inner]]
        return out
    if np.any(inner):
        k = j[inner] - 1
        t0, t1, v0, v1 = t[k], t[k + 1], v[k], v[k + 1]
        yy = y[inner]
        if convention is Convention.STRICT:
            lo, hi = _bisect_floats(t0, t1, lambda x: _segment_eval(x, t0, t1, v0, v1) <= yy)
            out[inner] = lo
        else:
            lo, hi = _bisect_floats(t0, t1, lambda x: _segment_eval(x, t0, t1, v0, v1) < yy)
            # when no float hits the level, both conventions name the same crossing;
            # report the strict representative so that weak <= strict holds exactly
            overshoot = _segment_eval(hi, t0, t1, v0, v1) > yy
            out[inner] = np.where(overshoot, lo, hi)
    return out


def generalized_inverse(xi, q: InverseQuery) -> float:
    """``inf{x : xi(x) > level}`` (strict) or ``>= level`` (weak); ``inf`` if empty."""
    return float(inverse_values(xi, [q.level], q.convention)[0])


def first_range_time(triple: ExtremaTriple, a: float) -> FirstRangeTime:
    """First time the range strictly exceeds ``a``."""
    if not a >= 0:
        raise DomainError(f"range level must be non-negative, got {a!r}")
    x = generalized_inverse(MonotonePath(triple.range_path), InverseQuery(a))
    return FirstRangeTime(float(a), None if math.isinf(x) else x, triple.horizon)


def first_range_times(triple: ExtremaTriple, levels) -> np.ndarray:
    levels = np.asarray(levels, dtype=np.float64)
    if np.any(levels < 0):
        raise DomainError("range levels must be non-negative")
    return inverse_values(MonotonePath(triple.range_path), levels)


def check_duality(triple: ExtremaTriple, a: float, t: float) -> tuple[bool, bool]:
    """``(R_t > a  <=>  theta(a) < t,  theta(R_t) >= t)``.

    The first relation is the strict-inverse duality written with the
    inequality on ``R`` oriented so that it holds for every continuous range
    path; equivalently ``R_t <= a  <=>  theta(a) >= t``. On a step range
    path the first relation can fail only when ``t`` is exactly a jump time.
    """
    v1, v2 = duality_flags(triple, [a], [t])
    return bool(v1[0]), bool(v2[0])


def duality_flags(triple: ExtremaTriple, a, t) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if np.any(a < 0):
        raise DomainError("range level must be non-negative")
    rng = triple.range_path
    r_t = np.atleast_1d(rng(t))
    theta_a = first_range_times(triple, a)
    theta_r = first_range_times(triple, r_t)
    first = (r_t > a) == (theta_a < t)
    second = theta_r >= t
    return first, second


@dataclass(frozen=True)
class InvolutionReport:
    max_discrepancy: float
    level_step: float
    probes_used: int
    probes_excluded: int
    delta: float

    @property
    def within_level_step(self) -> bool:
        return self.max_discrepancy <= self.level_step


def sampled_inverse(xi, n_levels: int | None = None,
                    convention=Convention.STRICT) -> tuple[SampledPath, float]:
    """Inverse of ``xi`` tabulated on a uniform level grid.

    Returns a linear path over ``u = y - xi(0)`` together with ``xi(0)``.
    Levels whose inverse is empty on the horizon are clamped to the horizon.
    """
    xi = _as_monotone(xi)
    v0, vT = float(xi.values[0]), float(xi.values[-1])
    if vT == v0:
        raise DomainError("constant path has a degenerate inverse")
    m = n_levels or (len(xi.values) - 1)
    m = max(int(m), 1)
    h = (vT - v0) / m
    u = np.arange(m + 1) * h
    x = inverse_values(xi, v0 + u, convention)
    x = np.minimum(x, xi.horizon)
    return SampledPath(TimeGrid(u, h), x), v0


def inverse_involution_check(xi, probe_levels, delta: float | None = None,
                             n_levels: int | None = None) -> InvolutionReport:
    """Compare ``(xi^dagger)^dagger`` against ``xi`` at the probe points.

    Probes within ``delta`` of a jump of ``xi`` are excluded (the double
    inverse only agrees almost everywhere). ``delta`` defaults to a quarter
    of the smallest grid spacing.
    """
    xi = _as_monotone(xi)
    probes = np.asarray(probe_levels, dtype=np.float64)
    t = xi.times
    if delta is None:
        delta = 0.25 * float(np.min(np.diff(t))) if t.size > 1 else 0.0
    jumps = xi.jump_times()
    keep = (probes >= 0) & (probes <= xi.horizon)
    if jumps.size:
        idx = np.clip(np.searchsorted(jumps, probes), 1, jumps.size) - 1
        near = np.minimum(np.abs(probes - jumps[idx]),
                          np.abs(probes - jumps[np.minimum(idx + 1, jumps.size - 1)]))
        keep &= near > delta
    used = probes[keep]
    if used.size == 0:
        return InvolutionReport(0.0, 0.0, 0, int(probes.size), delta)
    direct = np.atleast_1d(xi.base(used))
    if xi.values[-1] == xi.values[0]:
        # g = 0 below the constant, saturated above: double inverse is the constant
        return InvolutionReport(float(np.max(np.abs(direct - xi.values[0]))), 0.0,
                                int(used.size), int(probes.size - used.size), delta)
    g, origin = sampled_inverse(xi, n_levels)
    back = origin + inverse_values(MonotonePath(g), used)
    back = np.where(np.isinf(back), float(xi.values[-1]), back)
    disc = float(np.max(np.abs(back - direct)))
    return InvolutionReport(disc, float(g.grid.uniform_step), int(used.size),
                            int(probes.size - used.size), delta)


def inverse_transform_sample(cdf, u):
    """Left-continuous inverse of a tabulated CDF evaluated at ``u`` in (0, 1)."""
    cdf = _as_monotone(cdf)
    if np.any(cdf.values < 0) or np.any(cdf.values > 1):
        raise DomainError("CDF values must lie in [0, 1]")
    uu = np.asarray(u, dtype=np.float64)
    if np.any(~((uu > 0) & (uu < 1))):
        raise DomainError("uniform variate must lie in the open interval (0, 1)")
    x = inverse_values(cdf, np.atleast_1d(uu), Convention.WEAK)
    # mass beyond the tabulated horizon lands on the horizon
    x = np.minimum(x, cdf.horizon)
    return float(x[0]) if uu.ndim == 0 else x


def write_theta_csv(levels, times, dest) -> None:
    write_csv(zip(levels, times), ("level", "time"), dest)


def write_inverse_csv(levels, xs, dest) -> None:
    write_csv(zip(levels, xs), ("y", "x"), dest)
