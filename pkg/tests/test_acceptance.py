"""End-to-end acceptance suite: each test is one numbered criterion, run at its
stated tolerance. A PASS/FAIL line per criterion is printed after the run."""
import math

import numpy as np
import pytest

from rangeproc import experiment as exp
from rangeproc import rng
from rangeproc.asymptotics import (CONVERGED, DIVERGING, duality_experiment,
                                   inverse_slope_experiment, pnorm_negligibility_check,
                                   range_slope_check, range_slope_experiment,
                                   renewal_equivalence_check, step_halving_delta,
                                   sup_slope_check, sup_slope_experiment)
from rangeproc.extrema import discrete_range, running_extrema
from rangeproc.inverse import MonotonePath, inverse_involution_check
from rangeproc.paths import Interpolation, SampledPath, TimeGrid, connect_dots, evaluate
from rangeproc.simulate import (ProcessSpec, function_bank, normalizer, simulate_renewal,
                                simulate_walk)

HORIZON, STEP, REPLICAS = 10_000.0, 0.01, 100
BANK_GRID = TimeGrid.uniform(HORIZON, STEP)


def drift(eta, seed, horizon=HORIZON):
    return ProcessSpec.from_token(f"drift:{eta}" if eta else "bm", horizon, STEP, seed)


def test_criterion_01_drifted_range_slope(criterion):
    rec = criterion(1, "drifted Brownian range slope -> |eta|")
    results = []
    for eta, seed in ((0.5, 1101), (1.0, 1001), (2.0, 1102), (-1.0, 1103)):
        rep = range_slope_experiment(drift(eta, seed), REPLICAS)
        mean = rep.estimates["range_slope"]["mean"]
        tol = 0.05 * max(1.0, abs(eta))
        ok = rep.verdict == CONVERGED and abs(mean - abs(eta)) <= tol
        results.append(rec(ok, f"eta={eta:+}: mean range slope {mean:.4f}, "
                               f"target {abs(eta)}, tol {tol}"))
    assert all(results)


def test_criterion_02_driftless_range_slope(criterion):
    rec = criterion(2, "driftless range slope -> 0 with sqrt(T)/T scaling")
    tol = 0.1
    short = range_slope_experiment(drift(0, 1002), REPLICAS, tolerance=tol)
    long = range_slope_experiment(drift(0, 1002, horizon=4 * HORIZON), REPLICAS, tolerance=tol)
    m1 = short.estimates["range_slope"]["mean"]
    m4 = long.estimates["range_slope"]["mean"]
    ok1 = rec(short.verdict == CONVERGED and abs(m1) <= tol,
              f"T=1e4: mean range slope {m1:.4f} (|.| <= {tol})")
    ratio = m4 / m1
    ok2 = rec(abs(ratio - 0.5) <= 0.5 * 0.5, f"T=4e4: mean {m4:.4f}, ratio {ratio:.3f} "
                                            "(0.5 +/- 50%)")
    delta = step_halving_delta(drift(0, 1002))
    ok3 = rec(delta <= tol / 10, f"step-halving delta {delta:.2e} (<= {tol / 10})")
    assert ok1 and ok2 and ok3


def test_criterion_03_inverse_slope(criterion):
    rec = criterion(3, "first-range-time slope -> 1/eta, diverging at eta=0")
    results = []
    for eta, seed in ((1.0, 1001), (2.0, 1102)):
        rep = inverse_slope_experiment(drift(eta, seed), REPLICAS, tolerance=0.05)
        ls = rep.estimates["ladder_slope"]["mean"]
        results.append(rec(abs(ls - 1 / eta) <= 0.05,
                           f"eta={eta}: ladder slope {ls:.4f}, target {1 / eta}"))
    rep = inverse_slope_experiment(drift(0, 1002), REPLICAS)
    top = rep.estimates["top_ratio"]
    results.append(rec(top["min"] > 10, f"eta=0: top-of-ladder ratio min {top['min']:.1f}, "
                                        f"mean {top['mean']:.1f} (> 10)"))
    assert all(results)


BANK_CASES = [("neg_drift_log", ()), ("drift_sine", (-3.0,)), ("sqrt_over_t", ()),
              ("drift_sine", ()), ("linear_sine", ()), ("quadratic", ())]


def test_criterion_04_deterministic_bank(criterion):
    rec = criterion(4, "deterministic range slopes on the function bank")
    psi = normalizer("t", BANK_GRID)
    results = []
    for bid, params in BANK_CASES:
        e = function_bank(bid, *params)
        path = SampledPath(BANK_GRID, e.f(BANK_GRID.times))
        rep = range_slope_check(path, psi, expected=e.limit, tolerance=0.02)
        got = rep.estimates["range"]["value"]
        want = DIVERGING if math.isinf(e.limit) else CONVERGED
        results.append(rec(rep.passed and rep.verdict == want,
                           f"{e.description}: l={e.limit}, range slope {got} ({rep.verdict})"))
    assert all(results)


DUALITY_KINDS = ["drift:1.0", "bm", "bessel:3", "walk:0.5", "walk:0.8",
                 "renewal:exponential:1"]


def test_criterion_05_duality(criterion):
    rec = criterion(5, "range / first-range-time duality, zero violations")
    results = []
    for i, token in enumerate(DUALITY_KINDS):
        step = 1.0 if token.startswith(("walk", "renewal")) else STEP
        spec = ProcessSpec.from_token(token, 1000.0, step, 5000 + i)
        rep = duality_experiment(spec, replicas=20, probes=1000)
        v1 = rep.estimates["equivalence_violations"]
        v2 = rep.estimates["inequality_violations"]
        lit = rep.details["reversed_form_counterexamples"]
        results.append(rec(v1 == 0 and v2 == 0,
                           f"{token}: 20 paths x 1000 probes, violations {v1} + {v2} "
                           f"(reversed form fails on {lit}, e.g. "
                           f"{rep.details['reversed_form_example']})"))
    assert all(results)


def random_monotone_path(gen, interpolation):
    n = int(gen.integers(20, 400))
    gaps = gen.uniform(0.05, 2.0, n - 1)
    times = np.concatenate(([0.0], np.cumsum(gaps)))
    inc = np.where(gen.random(n - 1) < 0.3, 0.0, gen.exponential(1.0, n - 1))
    values = gen.normal() + np.concatenate(([0.0], np.cumsum(inc)))
    return MonotonePath(SampledPath.from_arrays(times, values, interpolation))


def test_criterion_06_involution(criterion):
    rec = criterion(6, "double generalized inverse returns the path off the jump set")
    gen = rng.stream(6006, rng.SAMPLES)
    worst = {m: 0.0 for m in Interpolation}
    bad, used, excluded = 0, 0, 0
    for k in range(200):
        mode = (Interpolation.STEP, Interpolation.LINEAR)[k % 2]
        xi = random_monotone_path(gen, mode)
        probes = gen.uniform(0.0, xi.horizon, 100)
        rep = inverse_involution_check(xi, probes)
        used += rep.probes_used
        excluded += rep.probes_excluded
        bad += not rep.within_level_step
        if rep.level_step > 0:
            worst[mode] = max(worst[mode], rep.max_discrepancy / rep.level_step)
    ok = rec(bad == 0 and used > 0,
             f"200 paths, {used} probes used, {excluded} near jumps excluded; worst "
             f"discrepancy/level step: step {worst[Interpolation.STEP]:.3f}, "
             f"linear {worst[Interpolation.LINEAR]:.3f}")
    assert ok


def test_criterion_07_discrete_bridge(criterion):
    rec = criterion(7, "walk range vs connected-dots range, and 2p-1 speed")
    n = 100_000
    results = []
    for p, target in ((0.5, 0.0), (0.8, 0.6), (1.0, 1.0)):
        worst = 0.0
        for rep_i in range(5):
            x = simulate_walk(ProcessSpec.from_token(f"walk:{p}", float(n), 1.0, 7000), rep_i)
            counts = discrete_range(x).counts
            cont = running_extrema(connect_dots(x)).range_path
            gap = np.abs(evaluate(cont, np.arange(n + 1, dtype=float)) - counts)
            worst = max(worst, float(gap.max()))
            if rep_i == 0:
                speed = counts[-1] / n
        results.append(rec(worst <= 2, f"p={p}: max |R - r| over all integer times, "
                                       f"5 walks: {worst:g}"))
        results.append(rec(abs(speed - target) <= 0.02,
                           f"p={p}: r_n/n = {speed:.4f}, target {target}"))
    assert all(results)


def test_criterion_08_renewal(criterion):
    rec = criterion(8, "renewal equivalence T_n/n -> g iff N_t/t -> 1/g")
    results = []
    for law, seed in (("exponential:1", 8001), ("uniform:0:2", 8002)):
        spec = ProcessSpec.from_token(f"renewal:{law}", 100_000.0, 1.0, seed)
        r = simulate_renewal(spec)
        rep = renewal_equivalence_check(r, 1.0, tolerance=0.02)
        e = rep.estimates
        results.append(rec(rep.passed, f"{law}: {r.n_arrivals} arrivals, T_n/n "
                                       f"{e['arrival_ratio']:.4f}, N_t/t {e['count_ratio']:.4f}"))
    spec = ProcessSpec.from_token("renewal:deterministic:2", 200_000.0, 2.0, 8003)
    rep = renewal_equivalence_check(simulate_renewal(spec), 2.0, eval_step=2.0)
    e = rep.estimates
    exact = (e["arrival_ratio"] == 2.0 and e["count_ratio"] == 0.5
             and e["arrival_spread"] == 0.0 and e["count_spread"] == 0.0)
    results.append(rec(exact and rep.details["inversion_exact"],
                       f"deterministic 2: T_n/n {e['arrival_ratio']!r}, "
                       f"N_t/t {e['count_ratio']!r} (exact)"))
    assert all(results)


def test_criterion_09_norm_negligibility(criterion):
    rec = criterion(9, "range of norms of Brownian motion is o(t)")
    results = []
    for token, seed in (("pnorm:2:2", 9001), ("pnorm:3:2", 9002), ("pnorm:4:inf", 9003),
                        ("pnorm:2:0.5", 9004)):
        rep = pnorm_negligibility_check(ProcessSpec.from_token(token, HORIZON, STEP, seed),
                                        threshold=0.15, replicas=10)
        s = rep.estimates["abs_range_slope"]
        results.append(rec(rep.passed, f"{token}: |range slope| mean {s['mean']:.4f}, "
                                       f"max {s['max']:.4f} ({rep.verdict})"))
    verdicts = {}
    for token in ("bessel:3", "besselsde:3"):
        rep = pnorm_negligibility_check(ProcessSpec.from_token(token, HORIZON, STEP, 9005),
                                        threshold=0.15, replicas=3)
        verdicts[token] = rep.verdict
        s = rep.estimates["abs_range_slope"]
        results.append(rec(rep.passed, f"{token}: |range slope| mean {s['mean']:.4f} "
                                       f"({rep.verdict}, floor clamps "
                                       f"{rep.details['floor_clamps']})"))
    results.append(rec(len(set(verdicts.values())) == 1,
                       f"bessel_norm vs bessel_sde verdicts: {verdicts}"))
    assert all(results)


def test_criterion_10_sup_process(criterion):
    rec = criterion(10, "sup process shares the long-run slope")
    f = function_bank("linear_sine")
    path = SampledPath(BANK_GRID, f.f(BANK_GRID.times))
    rep = sup_slope_check(path, normalizer("t", BANK_GRID), expected=2.0, tolerance=0.01)
    four = {k: round(rep.estimates[k]["tail_mean"], 5) for k in ("f", "sup", "range",
                                                                  "range_sup")}
    ok1 = rec(rep.passed, f"2t + sin t: slopes {four} (within 0.01 of 2)")
    rep = sup_slope_experiment(drift(1.0, 1001), REPLICAS, expected=1.0, tolerance=0.05)
    e = rep.estimates
    ok2 = rec(rep.passed and abs(e["sup"]["mean"] - 1) <= 0.05
              and abs(e["range_sup"]["mean"] - 1) <= 0.05,
              f"eta=1: sup slope {e['sup']['mean']:.4f}, range-of-sup slope "
              f"{e['range_sup']['mean']:.4f} (within 0.05 of 1)")
    assert ok1 and ok2


@pytest.mark.parametrize("name", exp.BUNDLED)
def test_criterion_11_reproducible_reports(name, criterion):
    rec = criterion(11, "bundled manifests give byte-identical reports on rerun")
    m = exp.ExperimentManifest.bundled(name)
    first = exp.dumps(exp.run_manifest(m, timestamp=False))
    second = exp.dumps(exp.run_manifest(m, timestamp=False))
    assert rec(first == second, f"{name}: {len(first)} bytes, identical={first == second}")
