"""Acceptance gates for the whole package, one test per criterion.

Each test prints a single PASS/FAIL line (run with `pytest -s` to see them
on success).  The checks are Monte Carlo at desk scale with pinned seeds;
tolerances are stated inline next to each assertion.  Expect a few minutes
of wall clock for the full module.
"""

import math
import time

import numpy as np
import pytest

from cirdetect import (
    ChangeScenario,
    CirParams,
    ExperimentConfig,
    SamplePath,
    compute_functionals,
    critical_value,
    cusum_trajectory,
    estimate_sigma_sq,
    lse_at,
    run_experiment,
    simulate_change_path,
    simulate_path,
    test_trajectory,
    two_sided_tail,
)
from cirdetect.harness import replication_rng

P05 = CirParams(1.0, 1.0, 0.5)
P1 = CirParams(1.0, 1.0, 1.0)
N_JOBS = 2


def _verdict(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[acceptance] criterion {num:2d} ({name}): {status}"
    if detail:
        line += f"  [{detail}]"
    print(line, flush=True)


def test_c01_sampler_moments():
    config = ExperimentConfig(
        kind="sampler-moments",
        params=P05,
        replications=100_000,
        x_values=(0.1, 1.0, 5.0),
        dt_values=(0.1, 1.0),
        master_seed=1001,
    )
    report = run_experiment(config)
    z1 = report.aggregates["max_abs_z_mean"]
    z2 = report.aggregates["max_abs_z_second_moment"]
    ok = z1 <= 3.0 and z2 <= 3.0
    _verdict(1, "sampler moments", ok, f"max|z| mean={z1:.2f}, m2={z2:.2f}")
    assert ok, report.aggregates


def test_c02_ergodic_averages():
    path = simulate_path(P1, "stationary", 5000.0, 0.01, replication_rng(2003, 0))
    fn = compute_functionals(path)
    T = fn.duration
    avgs = np.array([fn.cum_x[-1], fn.cum_x2[-1], fn.cum_x3[-1]]) / T
    targets = np.array([1.0, 1.5, 3.0])
    rel = np.abs(avgs / targets - 1.0)
    ok = bool(np.all(rel <= 0.03))
    _verdict(2, "ergodic averages", ok,
             f"rel err = {rel[0]:.3f}, {rel[1]:.3f}, {rel[2]:.3f} (tol 0.03)")
    assert ok, (avgs, targets)


def test_c03_sigma_recovery():
    path = simulate_path(P05, "stationary", 100.0, 1e-3, replication_rng(3001, 0))
    s2 = estimate_sigma_sq(path)
    point_ok = abs(s2 / 0.25 - 1.0) <= 0.02

    # refinement on common drivers: one fine path per replication,
    # subsampled to dt = 1e-2, 1e-3, 1e-4
    errs = {100: [], 10: [], 1: []}
    for k in range(6):
        fine = simulate_path(P05, "stationary", 100.0, 1e-4, replication_rng(3002, k))
        for lag in errs:
            sub = SamplePath(0.0, 1e-4 * lag, fine.values[::lag])
            errs[lag].append(abs(estimate_sigma_sq(sub) - 0.25))
    med = {lag: float(np.median(v)) for lag, v in errs.items()}
    refine_ok = med[100] > med[10] > med[1]
    ok = point_ok and refine_ok
    _verdict(3, "sigma^2 recovery", ok,
             f"sigma2={s2:.4f} (tol 2%), medians {med[100]:.2e} > "
             f"{med[10]:.2e} > {med[1]:.2e}")
    assert ok, (s2, med)


def test_c04_lse_consistency():
    horizons = (250.0, 1000.0, 4000.0)
    errors = {T: [] for T in horizons}
    for k in range(100):
        path = simulate_path(P05, "stationary", 4000.0, 0.01,
                             replication_rng(4001, k))
        fn = compute_functionals(path)
        for T in horizons:
            theta = lse_at(fn, T)
            errors[T].append(math.hypot(theta.a_hat - 1.0, theta.b_hat - 1.0))
    med = {T: float(np.median(v)) for T, v in errors.items()}
    ok = med[250.0] > med[1000.0] > med[4000.0] and med[4000.0] < 0.1
    _verdict(4, "LSE consistency", ok,
             f"median err {med[250.0]:.3f} > {med[1000.0]:.3f} > "
             f"{med[4000.0]:.3f}, last < 0.1")
    assert ok, med


def _identity_gap(fn) -> float:
    score_form = test_trajectory(fn)
    cusum_form = cusum_trajectory(fn)
    valid = ~np.isnan(cusum_form.values[:, 0])
    return float(np.abs(score_form.values[valid] - cusum_form.values[valid]).max())


def test_c05_cusum_identity():
    paths = [
        compute_functionals(
            simulate_path(P05, "stationary", 500.0, 0.01, replication_rng(5001, 0))
        ),
        compute_functionals(
            simulate_change_path(
                ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=200.0),
                "stationary", 0.01, replication_rng(5001, 1),
            ).path
        ),
        compute_functionals(
            simulate_path(P1, 0.2, 50.0, 0.01, replication_rng(5001, 2))
        ),
    ]
    gaps = [_identity_gap(fn) for fn in paths]
    ok = all(g < 1e-8 for g in gaps)
    _verdict(5, "CUSUM identity", ok, f"max gap {max(gaps):.2e} < 1e-8")
    assert ok, gaps


def test_c06_bridge_endpoints():
    worst = 0.0
    for k in range(5):
        path = simulate_path(P05, "stationary", 100.0, 0.01, replication_rng(6001, k))
        traj = test_trajectory(compute_functionals(path))
        worst = max(
            worst,
            float(np.abs(traj.values[0]).max()),
            float(np.abs(traj.values[-1]).max()),
        )
    ok = worst < 1e-10
    _verdict(6, "bridge endpoints", ok, f"worst endpoint {worst:.2e} < 1e-10")
    assert ok, worst


def test_c07_null_distribution():
    config = ExperimentConfig(
        kind="size",
        params=P05,
        t_end=500.0,
        dt=0.01,
        replications=1000,
        alpha=0.05,
        master_seed=7001,
    )
    report = run_experiment(config, n_jobs=N_JOBS)
    ks = report.aggregates["ks_distance_a"]
    rate = report.aggregates["rejection_rate_a"]
    ok = ks < 0.05 and 0.03 <= rate <= 0.08
    _verdict(7, "null distribution", ok,
             f"KS={ks:.3f} < 0.05, rejection rate={rate:.3f} in [0.03, 0.08]")
    assert ok, report.aggregates


def test_c08_power():
    config = ExperimentConfig(
        kind="power",
        scenario=ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=1000.0),
        dt=0.01,
        replications=200,
        alpha=0.05,
        master_seed=8001,
    )
    report = run_experiment(config, n_jobs=N_JOBS)
    two = report.aggregates["rejection_rate_two_sided"]
    one = report.aggregates["rejection_rate_one_sided"]
    ok = two >= 0.95 and one >= 0.95
    _verdict(8, "power under change", ok, f"two-sided {two:.3f}, one-sided {one:.3f}")
    assert ok, report.aggregates


def test_c09_drift_constants():
    results = {}
    for label, scenario, seed in (
        ("a", ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=2000.0), 9001),
        ("b", ChangeScenario(1.0, 1.0, 1.0, 2.0, 0.5, rho=0.5, horizon=2000.0), 9002),
    ):
        config = ExperimentConfig(
            kind="drift",
            scenario=scenario,
            dt=0.01,
            replications=200,
            master_seed=seed,
        )
        report = run_experiment(config, n_jobs=N_JOBS)
        results[label] = report.aggregates
    ok = all(
        agg["relative_error"] <= 0.10 and agg["sign_match_rate"] == 1.0
        for agg in results.values()
    )
    _verdict(
        9, "score drift vs psi/phi", ok,
        f"rel err a={results['a']['relative_error']:.3f}, "
        f"b={results['b']['relative_error']:.3f} (tol 0.10); signs all match",
    )
    assert ok, results


def test_c10_changepoint_localization():
    q90 = {}
    for T in (500.0, 1000.0, 2000.0):
        config = ExperimentConfig(
            kind="changepoint",
            scenario=ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=T),
            dt=0.01,
            replications=200,
            master_seed=10001,
        )
        report = run_experiment(config, n_jobs=N_JOBS)
        q90[T] = report.aggregates["abs_err_q90"]
    growth = q90[2000.0] / q90[500.0]
    ok = growth <= 1.5
    _verdict(10, "change-point localization", ok,
             f"q90 |tau_hat - rho T|: {q90[500.0]:.2f} (T=500) -> "
             f"{q90[2000.0]:.2f} (T=2000), growth {growth:.2f} <= 1.5")
    assert ok, q90


def test_c11_critical_values():
    round_trip_ok = all(
        abs(two_sided_tail(critical_value(alpha, "two-sided")) - alpha) <= 1e-8
        for alpha in (0.01, 0.05, 0.10)
    )
    closed_form_ok = (
        abs(critical_value(0.05, "upper") - math.sqrt(-math.log(0.05) / 2.0)) <= 1e-10
    )
    ok = round_trip_ok and closed_form_ok
    _verdict(11, "critical values", ok,
             "round trip <= 1e-8 at alpha 0.01/0.05/0.10; upper closed form 1e-10")
    assert ok


def test_c12_variance_linearity():
    from cirdetect.pathfun import _cumtrapz

    marks = np.array([100.0, 200.0, 400.0, 800.0])
    dt = 0.05
    idx = [round(t / dt) for t in marks]
    integrals = np.empty((500, 4))
    for k in range(500):
        path = simulate_path(P05, "stationary", 800.0, dt, replication_rng(12001, k))
        integrals[k] = _cumtrapz(path.values, dt)[idx]
    var_over_t = integrals.var(axis=0, ddof=1) / marks
    spread = float(var_over_t.max() / var_over_t.min())
    ok = spread < 2.0
    _verdict(12, "Var(int X) linear in t", ok,
             f"Var/t in [{var_over_t.min():.3f}, {var_over_t.max():.3f}], "
             f"spread {spread:.2f} < 2")
    assert ok, var_over_t.tolist()
