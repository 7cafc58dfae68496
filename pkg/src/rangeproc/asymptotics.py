"""Empirical long-run slopes and the checks built on them.

A slope is the tail behaviour of ``f(t) / psi(t)`` on a finite horizon. The
checks compare slopes of a path, its range, its running supremum and its
first-range-time inverse, per path (``*_check``) or over seeded replicas
(``*_experiment``).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from . import rng
from .extrema import ExtremaTriple, running_extrema, sup_process
from .inverse import (Convention, MonotonePath, duality_flags, first_range_times,
                      inverse_involution_check, inverse_values)
from .paths import DomainError, SampledPath, TimeGrid
from .simulate import (ProcessSpec, RenewalRealization, bessel_sde_path, function_bank,
                       normalizer, simulate, simulate_renewal)

CONVERGED = "converged"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

TAIL_FRACTION = 0.1
DIVERGENCE_FACTOR = 10.0
LADDER_LEVELS = 20
LADDER_SPAN = (0.05, 0.8)
LADDER_TAIL = 5


def default_spread_tolerance(tail_mean: float) -> float:
    return 0.05 * max(abs(tail_mean), 1.0)


@dataclass(frozen=True, eq=False)
class SlopeEstimate:
    ratio_times: np.ndarray
    ratio_values: np.ndarray
    tail_mean: float
    tail_spread: float
    tail_fraction: float
    spread_tolerance: float
    verdict: str

    @property
    def value(self) -> float:
        """The estimated limit: ``tail_mean`` if converged, ``inf`` if diverging."""
        if self.verdict == CONVERGED:
            return self.tail_mean
        if self.verdict == DIVERGING:
            return math.copysign(math.inf, self.ratio_values[-1])
        return math.nan

    @property
    def converged(self) -> bool:
        return self.verdict == CONVERGED

    def summary(self) -> dict:
        return {"verdict": self.verdict, "value": _num(self.value),
                "tail_mean": _num(self.tail_mean), "tail_spread": _num(self.tail_spread)}


def slope(path: SampledPath, psi: SampledPath, tail_fraction: float = TAIL_FRACTION,
          spread_tolerance: float | None = None) -> SlopeEstimate:
    """Ratio trace ``path / psi`` and its tail summary.

    Converged when the tail spread (max - min over the last ``tail_fraction``
    of the horizon) is within ``spread_tolerance``. Diverging when the ratio's
    magnitude is monotone over the tail and its final value is at least ten
    times its value at the start of the trace. Otherwise inconclusive.
    """
    if not np.array_equal(path.times, psi.times):
        raise DomainError("path and normalizer grids differ")
    if not 0 < tail_fraction < 1:
        raise DomainError("tail fraction must lie in (0, 1)")
    t = path.times
    tail = t >= (1.0 - tail_fraction) * t[-1]
    if np.any(psi.values[tail] <= 0):
        raise DomainError("normalizer must be positive on the tail")
    pos = psi.values > 0
    rt, rv = t[pos], path.values[pos] / psi.values[pos]
    tv = rv[tail[pos]]
    mean = float(np.mean(tv))
    spread = float(np.max(tv) - np.min(tv))
    tol = default_spread_tolerance(mean) if spread_tolerance is None else spread_tolerance
    if spread <= tol:
        verdict = CONVERGED
    else:
        mag = np.abs(tv)
        growing = np.all(np.diff(mag) >= 0) and np.all(np.sign(tv) == np.sign(tv[-1]))
        if growing and mag[-1] >= DIVERGENCE_FACTOR * abs(rv[0]):
            verdict = DIVERGING
        else:
            verdict = INCONCLUSIVE
    return SlopeEstimate(rt, rv, mean, spread, tail_fraction, tol, verdict)


def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class CheckReport:
    """Outcome of one check; serializes to plain JSON types."""

    check: str
    passed: bool
    verdict: str
    tolerance: float | None = None
    expected: float | None = None
    estimates: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            if isinstance(v, (bool, np.bool_)):
                return bool(v)
            if isinstance(v, (int, np.integer)):
                return int(v)
            if isinstance(v, (float, np.floating)):
                return _num(v)
            return v

        return clean({"check": self.check, "passed": self.passed, "verdict": self.verdict,
                      "tolerance": self.tolerance, "expected": self.expected,
                      "estimates": self.estimates, "details": self.details})


# --- single-path checks ---------------------------------------------------------

def range_slope_check(path: SampledPath, psi: SampledPath, expected: float | None = None,
                      tolerance: float = 0.05,
                      tail_fraction: float = TAIL_FRACTION) -> CheckReport:
    """Slope of the range against the absolute slope of the path.

    With both verdicts converged, ``|range - |path|| <= tolerance + path
    spread``; for a path slope near zero the range slope must also stay below
    three times the path's tail spread plus ``tolerance``. ``inf`` limits
    must give matching diverging verdicts. ``expected`` (the path's limit,
    signed) adds a comparison of the range slope with ``|expected|``.
    """
    sp = slope(path, psi, tail_fraction)
    sr = slope(running_extrema(path).range_path, psi, tail_fraction)
    ok = True
    gap = math.nan
    if sp.converged and sr.converged:
        gap = abs(sr.tail_mean - abs(sp.tail_mean))
        ok &= gap <= tolerance + sp.tail_spread
        if abs(sp.tail_mean) <= tolerance:
            ok &= sr.tail_mean <= 3 * sp.tail_spread + tolerance
    elif sp.verdict == DIVERGING:
        ok &= sr.verdict == DIVERGING
    else:
        ok = False
    if expected is not None:
        if math.isinf(expected):
            ok &= sr.verdict == DIVERGING
        else:
            ok &= sr.converged and abs(sr.tail_mean - abs(expected)) <= tolerance
    verdict = sr.verdict
    return CheckReport("range_slope", bool(ok), verdict, tolerance,
                       None if expected is None else abs(expected),
                       {"path": sp.summary(), "range": sr.summary(), "gap": gap})


def sup_slope_check(path: SampledPath, psi: SampledPath, expected: float | None = None,
                    tolerance: float = 0.05,
                    tail_fraction: float = TAIL_FRACTION) -> CheckReport:
    """Slopes of ``f``, ``sup f``, ``R(f)`` and ``R(sup f)`` agree, and
    ``sup f / f -> 1``.

    Requires a converged positive path slope, or a zero slope with ``f``
    positive on the tail; otherwise the report is inconclusive.
    """
    sf = slope(path, psi, tail_fraction)
    tail = path.times >= (1 - tail_fraction) * path.horizon
    positive_tail = bool(np.all(path.values[tail] > 0))
    if not (sf.converged and sf.tail_mean >= -tolerance and positive_tail):
        return CheckReport("sup_slope", False, INCONCLUSIVE, tolerance, expected,
                           {"path": sf.summary()},
                           {"reason": "path slope not converged to a non-negative limit "
                                      "with an eventually positive path"})
    sup = sup_process(path)
    s_sup = slope(sup, psi, tail_fraction)
    s_range = slope(running_extrema(path).range_path, psi, tail_fraction)
    s_range_sup = slope(running_extrema(sup).range_path, psi, tail_fraction)
    sup_over_f = sup.values[tail] / path.values[tail]
    ratio_mean = float(np.mean(sup_over_f)) if positive_tail else math.nan
    ref = sf.tail_mean if expected is None else expected
    four = {"f": sf, "sup": s_sup, "range": s_range, "range_sup": s_range_sup}
    ok = all(s.converged and abs(s.tail_mean - ref) <= tolerance for s in four.values())
    if positive_tail:
        ok &= abs(ratio_mean - 1.0) <= tolerance
    est = {k: s.summary() for k, s in four.items()}
    est["sup_over_f"] = ratio_mean
    return CheckReport("sup_slope", bool(ok), CONVERGED if ok else INCONCLUSIVE,
                       tolerance, expected, est)


def theta_ladder(triple: ExtremaTriple, n_levels: int = LADDER_LEVELS,
                 span: tuple[float, float] = LADDER_SPAN) -> tuple[np.ndarray, np.ndarray]:
    """Geometric ladder of range levels and their first range times."""
    top = float(triple.range_path.values[-1])
    levels = top * np.geomspace(span[0], span[1], n_levels)
    return levels, first_range_times(triple, levels)


def inverse_slope_check(triple: ExtremaTriple, expected: float, tolerance: float = 0.05,
                        top_threshold: float = 10.0, n_levels: int = LADDER_LEVELS,
                        ladder_tail: int = LADDER_TAIL,
                        tail_fraction: float = TAIL_FRACTION) -> CheckReport:
    """``theta(a)/a`` along the ladder tends to ``1/expected`` (or diverges
    when ``expected`` is 0).

    The ladder slope is the mean of ``theta(a)/a`` over its top
    ``ladder_tail`` levels. The range slope of the same path is reported and,
    when positive, its reciprocal is compared with the ladder slope.
    """
    top = float(triple.range_path.values[-1])
    if not top > 0:
        return CheckReport("inverse_slope", False, INCONCLUSIVE, tolerance, expected,
                           details={"reason": "range never leaves zero"})
    levels, theta = theta_ladder(triple, n_levels)
    if np.any(np.isinf(theta)):
        return CheckReport("inverse_slope", False, INCONCLUSIVE, tolerance, expected,
                           details={"reason": "ladder level not reached on the horizon"})
    ratios = theta / levels
    ladder_slope = float(np.mean(ratios[-ladder_tail:]))
    sr = slope(triple.range_path, normalizer("t", triple.range_path.grid), tail_fraction)
    m = sr.tail_mean
    est = {"ladder_slope": ladder_slope, "top_ratio": float(ratios[-1]),
           "range_slope": m, "reciprocal_range_slope": (1 / m) if m > 0 else math.inf}
    if expected > 0:
        ok = abs(ladder_slope - 1 / expected) <= tolerance
        if sr.converged and m > 0:
            est["reciprocity_gap"] = abs(ladder_slope - 1 / m)
        verdict = CONVERGED if ok else INCONCLUSIVE
        target = 1 / expected
    else:
        ok = ratios[-1] > top_threshold
        verdict = DIVERGING if ok else INCONCLUSIVE
        target = math.inf
    return CheckReport("inverse_slope", bool(ok), verdict, tolerance, target, est,
                       {"levels": levels.tolist(), "ratios": ratios.tolist()})


def renewal_equivalence_check(r: RenewalRealization, gamma: float, tolerance: float = 0.02,
                              tail_fraction: float = TAIL_FRACTION,
                              eval_step: float = 1.0, min_arrivals: int = 1000) -> CheckReport:
    """``T_n / n -> gamma`` together with ``N_t / t -> 1/gamma``.

    ``N_t / t`` is read on a uniform time grid of spacing ``eval_step``,
    independently of the arrival times. Also records whether the weak
    inverse of ``N`` reproduces every arrival time exactly.
    """
    n = r.n_arrivals
    if n < min_arrivals:
        return CheckReport("renewal", False, INCONCLUSIVE, tolerance, gamma,
                           details={"reason": f"only {n} arrivals", "arrivals": n})
    arr = r.arrivals.base
    s_t = slope(arr, arr.with_values(arr.times), tail_fraction, spread_tolerance=math.inf)
    horizon = r.counting.horizon
    m = int(math.floor(horizon / eval_step + 1e-9))
    grid = TimeGrid(np.arange(m + 1) * eval_step, eval_step)
    counts = SampledPath(grid, r.counting(grid.times))
    s_n = slope(counts, normalizer("t", grid), tail_fraction, spread_tolerance=math.inf)
    back = inverse_values(r.counting, np.arange(1, n + 1, dtype=np.float64), Convention.WEAK)
    exact = bool(np.array_equal(back, arr.values[1:]))
    ok = (abs(s_t.tail_mean - gamma) <= tolerance
          and abs(s_n.tail_mean - 1 / gamma) <= tolerance)
    return CheckReport("renewal", bool(ok), CONVERGED if ok else INCONCLUSIVE, tolerance,
                       gamma,
                       {"arrival_ratio": s_t.tail_mean, "count_ratio": s_n.tail_mean,
                        "arrival_spread": s_t.tail_spread, "count_spread": s_n.tail_spread},
                       {"arrivals": n, "inversion_exact": exact,
                        "expected_count_ratio": 1 / gamma})


# --- replica experiments -------------------------------------------------------------

@dataclass(frozen=True)
class ReplicaSummary:
    count: int
    mean: float
    min: float
    max: float

    @classmethod
    def of(cls, xs) -> ReplicaSummary:
        xs = np.asarray(list(xs), dtype=np.float64)
        return cls(int(xs.size), float(np.mean(xs)), float(np.min(xs)), float(np.max(xs)))

    def merge(self, other: ReplicaSummary) -> ReplicaSummary:
        n = self.count + other.count
        mean = (self.count * self.mean + other.count * other.mean) / n
        return ReplicaSummary(n, mean, min(self.min, other.min), max(self.max, other.max))

    def to_dict(self) -> dict:
        return {"count": self.count, "mean": _num(self.mean), "min": _num(self.min),
                "max": _num(self.max)}


def map_replicas(fn, replicas: int, jobs: int = 1) -> list:
    """``[fn(0), ..., fn(replicas - 1)]``, in replica order whatever ``jobs`` is."""
    if jobs <= 1 or replicas <= 1:
        return [fn(r) for r in range(replicas)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, range(replicas)))


def expected_path_slope(spec: ProcessSpec) -> float | None:
    """Known long-run slope of ``path / t`` for ``spec`` (``None`` when there is none)."""
    k = spec.kind
    if k == "drifted_bm":
        return spec.eta
    if k in ("standard_bm", "bessel_norm", "bessel_sde", "pnorm_bm"):
        return 0.0
    if k == "nn_walk":
        return 2 * spec.prob - 1
    if k == "renewal":
        return 1 / spec.inter_arrival.mean
    if k == "deterministic":
        return function_bank(spec.function, *spec.fparams).limit
    return None


def _single_path(spec: ProcessSpec, replica: int) -> SampledPath:
    path = simulate(spec, replica)
    if isinstance(path, list):
        raise DomainError("slope checks need a one-dimensional process")
    return path


def _range_replica(spec, psi, tail_fraction, tolerance, replica):
    path = _single_path(spec, replica)
    rep = range_slope_check(path, normalizer(psi, path.grid), None, tolerance, tail_fraction)
    return (rep.estimates["range"]["tail_mean"], rep.estimates["path"]["tail_mean"],
            rep.verdict, rep.passed)


def range_slope_experiment(spec: ProcessSpec, replicas: int, psi: str = "t",
                           expected: float | None = None, tolerance: float | None = None,
                           tail_fraction: float = TAIL_FRACTION, jobs: int = 1) -> CheckReport:
    """Replica-mean range slope against ``|expected|`` (default: the known slope)."""
    if expected is None:
        expected = expected_path_slope(spec)
    if tolerance is None:
        finite = expected is not None and math.isfinite(expected)
        tolerance = 0.05 * max(1.0, abs(expected) if finite else 1.0)
    rows = map_replicas(partial(_range_replica, spec, psi, tail_fraction, tolerance),
                        replicas, jobs)
    rs = ReplicaSummary.of(r[0] for r in rows)
    ps = ReplicaSummary.of(r[1] for r in rows)
    verdicts = sorted({r[2] for r in rows})
    consistent = sum(bool(r[3]) for r in rows)
    if expected is None:
        ok = consistent == replicas
    elif math.isinf(expected):
        ok = verdicts == [DIVERGING]
    else:
        ok = (verdicts == [CONVERGED] and consistent == replicas
              and abs(rs.mean - abs(expected)) <= tolerance)
    return CheckReport("range_slope", bool(ok), verdicts[0] if len(verdicts) == 1 else "mixed",
                       tolerance, None if expected is None else abs(expected),
                       {"range_slope": rs.to_dict(), "path_slope": ps.to_dict()},
                       {"replicas": replicas, "consistent_replicas": consistent})


def _sup_replica(spec, psi, tail_fraction, tolerance, expected, replica):
    path = _single_path(spec, replica)
    rep = sup_slope_check(path, normalizer(psi, path.grid), expected, tolerance, tail_fraction)
    e = rep.estimates
    keys = ("f", "sup", "range", "range_sup")
    return (tuple(e[k]["tail_mean"] if k in e else math.nan for k in keys),
            e.get("sup_over_f", math.nan), rep.verdict)


def sup_slope_experiment(spec: ProcessSpec, replicas: int, psi: str = "t",
                         expected: float | None = None, tolerance: float | None = None,
                         tail_fraction: float = TAIL_FRACTION, jobs: int = 1) -> CheckReport:
    """Replica means of the four slopes (``f``, ``sup f``, ``R(f)``, ``R(sup f)``).

    Per-replica closeness is not demanded for stochastic paths; the replica
    means must each lie within ``tolerance`` of ``expected``.
    """
    if expected is None:
        expected = expected_path_slope(spec)
    if tolerance is None:
        tolerance = 0.05 * max(1.0, abs(expected))
    rows = map_replicas(partial(_sup_replica, spec, psi, tail_fraction, math.inf, None),
                        replicas, jobs)
    names = ("f", "sup", "range", "range_sup")
    sums = {n: ReplicaSummary.of(r[0][i] for r in rows) for i, n in enumerate(names)}
    ratio = ReplicaSummary.of(r[1] for r in rows)
    inconclusive = sum(r[2] == INCONCLUSIVE for r in rows)
    ok = inconclusive == 0 and all(abs(s.mean - expected) <= tolerance for s in sums.values())
    ok &= abs(ratio.mean - 1) <= tolerance
    est = {n: s.to_dict() for n, s in sums.items()}
    est["sup_over_f"] = ratio.to_dict()
    return CheckReport("sup_slope", bool(ok), CONVERGED if ok else INCONCLUSIVE, tolerance,
                       expected, est, {"replicas": replicas, "inconclusive": inconclusive})


def _inverse_replica(spec, expected, tolerance, replica):
    triple = running_extrema(_single_path(spec, replica))
    rep = inverse_slope_check(triple, expected, tolerance)
    e = rep.estimates
    return (e.get("ladder_slope", math.nan), e.get("top_ratio", math.nan),
            e.get("range_slope", math.nan), rep.verdict)


def inverse_slope_experiment(spec: ProcessSpec, replicas: int, expected: float | None = None,
                             tolerance: float = 0.05, top_threshold: float = 10.0,
                             jobs: int = 1) -> CheckReport:
    """Replica-mean ladder slope against ``1/|expected|``; top-of-ladder ratio
    above ``top_threshold`` when ``expected`` is 0."""
    if expected is None:
        expected = expected_path_slope(spec)
    expected = abs(expected)
    rows = map_replicas(partial(_inverse_replica, spec, expected, tolerance), replicas, jobs)
    ladder = ReplicaSummary.of(r[0] for r in rows)
    top = ReplicaSummary.of(r[1] for r in rows)
    rng_s = ReplicaSummary.of(r[2] for r in rows)
    if expected > 0:
        ok = abs(ladder.mean - 1 / expected) <= tolerance
        target = 1 / expected
        recip = abs(ladder.mean - 1 / rng_s.mean)
    else:
        ok = top.mean > top_threshold
        target = math.inf
        recip = None
    return CheckReport("inverse_slope", bool(ok), CONVERGED if ok and expected > 0 else
                       (DIVERGING if ok else INCONCLUSIVE), tolerance, target,
                       {"ladder_slope": ladder.to_dict(), "top_ratio": top.to_dict(),
                        "range_slope": rng_s.to_dict(), "reciprocity_gap": recip},
                       {"replicas": replicas, "top_threshold": top_threshold})


def _renewal_replica(spec, tolerance, tail_fraction, replica):
    r = simulate_renewal(spec, replica)
    rep = renewal_equivalence_check(r, spec.inter_arrival.mean, tolerance, tail_fraction,
                                    eval_step=spec.step)
    return rep.to_dict()


def renewal_experiment(spec: ProcessSpec, replicas: int, tolerance: float = 0.02,
                       tail_fraction: float = TAIL_FRACTION, jobs: int = 1) -> CheckReport:
    """Each replica must satisfy the renewal equivalence with ``gamma`` the
    mean inter-arrival time."""
    rows = map_replicas(partial(_renewal_replica, spec, tolerance, tail_fraction),
                        replicas, jobs)
    gamma = spec.inter_arrival.mean
    passed = sum(r["passed"] for r in rows)
    exact = sum(r["details"].get("inversion_exact", False) for r in rows)
    est = {"arrival_ratio": ReplicaSummary.of(r["estimates"].get("arrival_ratio", math.nan)
                                              for r in rows).to_dict(),
           "count_ratio": ReplicaSummary.of(r["estimates"].get("count_ratio", math.nan)
                                            for r in rows).to_dict()}
    ok = passed == replicas and exact == replicas
    return CheckReport("renewal", bool(ok), CONVERGED if ok else INCONCLUSIVE, tolerance,
                       gamma, est, {"replicas": replicas, "passed_replicas": passed,
                                    "inversion_exact_replicas": exact,
                                    "expected_count_ratio": 1 / gamma})


def _pnorm_replica(spec, tail_fraction, replica):
    clamps = 0
    if spec.kind == "bessel_sde":
        path, clamps = bessel_sde_path(spec, replica)
    else:
        path = _single_path(spec, replica)
    s = slope(running_extrema(path).range_path, normalizer("t", path.grid), tail_fraction)
    return s.tail_mean, s.verdict, clamps


def pnorm_negligibility_check(spec: ProcessSpec, threshold: float = 0.1, replicas: int = 1,
                              tail_fraction: float = TAIL_FRACTION, jobs: int = 1) -> CheckReport:
    """Range of a norm-of-Brownian-motion process (or Bessel SDE) is ``o(t)``.

    Every replica's range slope must be converged; the replica mean of
    ``|slope|`` must not exceed ``threshold``.
    """
    if spec.kind not in ("bessel_norm", "bessel_sde", "pnorm_bm"):
        raise DomainError("p-norm check needs a bessel_norm, bessel_sde or pnorm_bm spec")
    rows = map_replicas(partial(_pnorm_replica, spec, tail_fraction), replicas, jobs)
    s = ReplicaSummary.of(abs(r[0]) for r in rows)
    verdicts = sorted({r[1] for r in rows})
    ok = verdicts == [CONVERGED] and s.mean <= threshold
    return CheckReport("pnorm", bool(ok), verdicts[0] if len(verdicts) == 1 else "mixed",
                       threshold, 0.0, {"abs_range_slope": s.to_dict()},
                       {"replicas": replicas, "floor_clamps": sum(r[2] for r in rows)})


def _duality_replica(spec, probes, replica):
    path = _single_path(spec, replica)
    triple = running_extrema(path)
    gen = rng.stream(spec.seed, rng.PROBES, replica)
    top = float(triple.range_path.values[-1])
    a = gen.uniform(0.0, 1.1 * top + 1.0, probes)
    t = gen.uniform(0.0, path.horizon, probes)
    first, second = duality_flags(triple, a, t)
    # diagnostic only: the equivalence with the inequality on R reversed
    r_t = triple.range_path(t)
    theta = first_range_times(triple, a)
    literal = (r_t < a) == (theta < t)
    example = None
    if not literal.all():
        k = int(np.argmax(~literal))
        example = [float(a[k]), float(t[k]), float(r_t[k]), float(theta[k])]
    return int(np.sum(~first)), int(np.sum(~second)), int(np.sum(~literal)), example


def duality_experiment(spec: ProcessSpec, replicas: int, probes: int = 1000,
                       jobs: int = 1) -> CheckReport:
    """Random ``(a, t)`` probes of both range/first-range-time duality relations.

    Also counts probes where ``R_t < a  <=>  theta(a) < t`` fails, and keeps
    one such ``[a, t, R_t, theta(a)]``; that form is not part of the verdict.
    """
    rows = map_replicas(partial(_duality_replica, spec, probes), replicas, jobs)
    v1 = sum(r[0] for r in rows)
    v2 = sum(r[1] for r in rows)
    ok = v1 == 0 and v2 == 0
    examples = [r[3] for r in rows if r[3] is not None]
    return CheckReport("duality", ok, "holds" if ok else "violated", 0.0, 0.0,
                       {"equivalence_violations": v1, "inequality_violations": v2},
                       {"replicas": replicas, "probes_per_replica": probes,
                        "reversed_form_counterexamples": sum(r[2] for r in rows),
                        "reversed_form_example": examples[0] if examples else None})


def _involution_replica(spec, probes, n_levels, replica):
    path = _single_path(spec, replica)
    xi = MonotonePath(running_extrema(path).range_path)
    gen = rng.stream(spec.seed, rng.PROBES, replica, 1)
    x = gen.uniform(0.0, path.horizon, probes)
    rep = inverse_involution_check(xi, x, n_levels=n_levels)
    return rep.max_discrepancy, rep.level_step, rep.within_level_step


def involution_experiment(spec: ProcessSpec, replicas: int, probes: int = 200,
                          n_levels: int = 2000, jobs: int = 1) -> CheckReport:
    """Double inverse of each replica's range path against the range path itself."""
    rows = map_replicas(partial(_involution_replica, spec, probes, n_levels), replicas, jobs)
    within = sum(bool(r[2]) for r in rows)
    ok = within == replicas
    return CheckReport("involution", ok, "holds" if ok else "violated", None, 0.0,
                       {"max_discrepancy": ReplicaSummary.of(r[0] for r in rows).to_dict(),
                        "level_step": ReplicaSummary.of(r[1] for r in rows).to_dict()},
                       {"replicas": replicas, "probes_per_replica": probes,
                        "within_level_step": within})


def step_halving_delta(spec: ProcessSpec, psi: str = "t",
                       tail_fraction: float = TAIL_FRACTION) -> float | None:
    """Change in replica 0's range slope when the step is halved.

    For Brownian-driven kinds the coarse path is the fine one sampled at
    every other knot, so both estimates refer to the same realization.
    """
    if spec.kind in ("nn_walk", "renewal", "multidim_bm"):
        return None
    fine_spec = ProcessSpec.from_dict({**spec.to_dict(), "step": spec.step / 2})
    if spec.kind == "bessel_sde":
        coarse, fine = simulate(spec), simulate(fine_spec)
    else:
        fine = simulate(fine_spec)
        coarse = SampledPath(TimeGrid(fine.times[::2]), fine.values[::2])

    def est(p):
        return slope(running_extrema(p).range_path, normalizer(psi, p.grid),
                     tail_fraction).tail_mean

    return abs(est(coarse) - est(fine))
