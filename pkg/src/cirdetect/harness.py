"""Monte Carlo experiment harness and path CSV I/O.

Experiments are replication loops with one independently seeded generator
per replication, derived from (master_seed, replication_index), so results
do not depend on execution order or worker count.  Five kinds are
supported:

    size            empirical level and sup-statistic law under no change
    power           rejection rates under a single-change scenario
    drift           extremum of the raw score per unit time vs its target
    changepoint     distribution of |tau_hat - rho T|
    sampler-moments transition draws vs closed-form conditional moments

Reports carry the config echo, aggregates, optional per-replication rows,
the master seed and the wall clock.  The JSON body is deterministic given
the config; wall clock is measurement metadata and can be excluded.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decision import TestSpec, run_test, two_sided_tail
from .errors import (
    MalformedRowError,
    NegativeValueError,
    NonUniformGridError,
)
from .estimator import lse_full
from .changepoint import drift_phi, drift_psi, estimate_change_point
from .model import CirParams, conditional_mean, conditional_second_moment
from .pathfun import compute_functionals
from .sampler import (
    ChangeScenario,
    SamplePath,
    sample_transition,
    simulate_change_path,
    simulate_path,
)
from .testprocess import raw_score, test_trajectory

EXPERIMENT_KINDS = ("size", "power", "drift", "changepoint", "sampler-moments")


# ---------------------------------------------------------------------------
# path CSV round trip


def write_path_csv(filepath, path: SamplePath) -> None:
    """Write a path as `t,x` rows at full (round-trippable) precision."""
    times = path.times
    with open(filepath, "w") as f:
        f.write("t,x\n")
        for t, x in zip(times, path.values):
            f.write(f"{float(t)!r},{float(x)!r}\n")


def read_path_csv(filepath) -> SamplePath:
    """Read a `t,x` CSV back into a SamplePath.

    Enforces the exact header, two parseable floats per row, nonnegative
    state values and a uniform time grid (relative tolerance 1e-9); each
    violation raises its own diagnostic naming the offending line.
    """
    with open(filepath) as f:
        lines = f.read().splitlines()
    if not lines or lines[0].strip() != "t,x":
        raise MalformedRowError("line 1: expected header 't,x'")
    times = []
    values = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise MalformedRowError(f"line {ln}: expected two fields, got {len(parts)}")
        try:
            t = float(parts[0])
            x = float(parts[1])
        except ValueError:
            raise MalformedRowError(f"line {ln}: could not parse floats from {line!r}")
        if not (math.isfinite(t) and math.isfinite(x)):
            raise MalformedRowError(f"line {ln}: non-finite value in {line!r}")
        if x < 0:
            raise NegativeValueError(f"line {ln}: negative state value {x}")
        times.append(t)
        values.append(x)
    if len(times) < 2:
        raise MalformedRowError("need at least two data rows")
    t_arr = np.asarray(times)
    diffs = np.diff(t_arr)
    dt = float((t_arr[-1] - t_arr[0]) / (t_arr.size - 1))
    if dt <= 0:
        raise NonUniformGridError("time column is not strictly increasing")
    worst = int(np.argmax(np.abs(diffs - dt)))
    if abs(diffs[worst] - dt) > 1e-9 * dt:
        raise NonUniformGridError(
            f"non-uniform grid near line {worst + 2}: "
            f"step {diffs[worst]!r} vs mean step {dt!r}"
        )
    return SamplePath(t0=float(t_arr[0]), dt=dt, values=np.asarray(values))


# ---------------------------------------------------------------------------
# experiment configuration


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run depends on.

    H0 kinds (size, sampler-moments) need params and t_end; alternative
    kinds (power, drift, changepoint) need a scenario, whose horizon is the
    time span.  sampler-moments additionally takes x_values/dt_values and
    reads `replications` as the number of draws per combination.
    """

    kind: str
    params: CirParams | None = None
    scenario: ChangeScenario | None = None
    t_end: float | None = None
    dt: float = 0.01
    replications: int = 1
    grid_m: int | None = None
    alpha: float = 0.05
    master_seed: int = 0
    x0: object = "stationary"
    sigma_sq: object = "auto"
    x_values: tuple = ()
    dt_values: tuple = ()
    out: str | None = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.kind in ("power", "drift", "changepoint"):
            if self.scenario is None:
                raise ValueError(f"kind {self.kind!r} requires a scenario")
        elif self.params is None:
            raise ValueError(f"kind {self.kind!r} requires params")
        if self.kind == "size" and self.t_end is None:
            raise ValueError("kind 'size' requires t_end")
        if self.kind == "sampler-moments" and not (self.x_values and self.dt_values):
            raise ValueError("kind 'sampler-moments' requires x_values and dt_values")

    @property
    def horizon(self) -> float:
        return self.scenario.horizon if self.scenario is not None else self.t_end

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.params is not None:
            d["params"] = {"a": self.params.a, "b": self.params.b, "sigma": self.params.sigma}
        if self.scenario is not None:
            s = self.scenario
            d["scenario"] = {
                "a_pre": s.a_pre,
                "b_pre": s.b_pre,
                "a_post": s.a_post,
                "b_post": s.b_post,
                "sigma": s.sigma,
                "rho": s.rho,
                "horizon": s.horizon,
            }
        if self.t_end is not None:
            d["t_end"] = self.t_end
        d["dt"] = self.dt
        d["replications"] = self.replications
        if self.grid_m is not None:
            d["grid_m"] = self.grid_m
        d["alpha"] = self.alpha
        d["master_seed"] = self.master_seed
        d["x0"] = self.x0
        d["sigma_sq"] = self.sigma_sq
        if self.x_values:
            d["x_values"] = list(self.x_values)
        if self.dt_values:
            d["dt_values"] = list(self.dt_values)
        if self.out is not None:
            d["out"] = self.out
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        params = d.pop("params", None)
        scenario = d.pop("scenario", None)
        kwargs = {}
        if params is not None:
            kwargs["params"] = CirParams(**params)
        if scenario is not None:
            kwargs["scenario"] = ChangeScenario(**scenario)
        for key in (
            "kind",
            "t_end",
            "dt",
            "replications",
            "grid_m",
            "alpha",
            "master_seed",
            "x0",
            "sigma_sq",
            "out",
        ):
            if key in d:
                kwargs[key] = d.pop(key)
        if "x_values" in d:
            kwargs["x_values"] = tuple(d.pop("x_values"))
        if "dt_values" in d:
            kwargs["dt_values"] = tuple(d.pop("dt_values"))
        if d:
            raise ValueError(f"unknown config keys: {sorted(d)}")
        return cls(**kwargs)


def replication_rng(master_seed: int, index: int) -> np.random.Generator:
    """Generator for replication `index`: stable under count changes."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, index]))


# ---------------------------------------------------------------------------
# scenario focus: which parameter changed, and in which direction


def scenario_focus(scenario: ChangeScenario) -> tuple[str, int, str, float]:
    """(parameter, component, direction, drift_target) of a one-change scenario."""
    a_changed = scenario.a_pre != scenario.a_post
    b_changed = scenario.b_pre != scenario.b_post
    if a_changed == b_changed:
        raise ValueError(
            "scenario must change exactly one of a, b for this experiment kind"
        )
    if a_changed:
        direction = "down" if scenario.a_pre > scenario.a_post else "up"
        return "a", 1, direction, drift_psi(scenario)
    direction = "down" if scenario.b_pre > scenario.b_post else "up"
    return "b", 2, direction, drift_phi(scenario)


# ---------------------------------------------------------------------------
# per-replication work


def _rep_size(config: ExperimentConfig, rng) -> dict:
    path = simulate_path(config.params, config.x0, config.t_end, config.dt, rng)
    fn = compute_functionals(path, config.sigma_sq)
    traj = test_trajectory(fn, config.grid_m)
    dec_a = run_test(traj, TestSpec("a", "two-sided", config.alpha))
    dec_b = run_test(traj, TestSpec("b", "two-sided", config.alpha))
    return {
        "stat_a": dec_a.statistic,
        "stat_b": dec_b.statistic,
        "reject_a": int(dec_a.reject),
        "reject_b": int(dec_b.reject),
    }


def _rep_power(config: ExperimentConfig, rng) -> dict:
    param, _, _, target = scenario_focus(config.scenario)
    cp = simulate_change_path(config.scenario, config.x0, config.dt, rng)
    fn = compute_functionals(cp.path, config.sigma_sq)
    traj = test_trajectory(fn, config.grid_m)
    two = run_test(traj, TestSpec(param, "two-sided", config.alpha))
    oriented = "upper" if target > 0 else "lower"
    one = run_test(traj, TestSpec(param, oriented, config.alpha))
    return {
        "stat_two": two.statistic,
        "reject_two": int(two.reject),
        "stat_one": one.statistic,
        "reject_one": int(one.reject),
    }


def _rep_drift(config: ExperimentConfig, rng) -> dict:
    _, component, _, target = scenario_focus(config.scenario)
    cp = simulate_change_path(config.scenario, config.x0, config.dt, rng)
    fn = compute_functionals(cp.path, config.sigma_sq)
    raw = raw_score(fn, lse_full(fn))
    values = raw.values[:, component - 1]
    ext = float(values.max()) if target > 0 else float(values.min())
    return {
        "extremum": ext,
        "extremum_over_t": ext / config.scenario.horizon,
        "sign_ok": int(math.copysign(1.0, ext) == math.copysign(1.0, target)),
    }


def _rep_changepoint(config: ExperimentConfig, rng) -> dict:
    _, component, direction, _ = scenario_focus(config.scenario)
    cp = simulate_change_path(config.scenario, config.x0, config.dt, rng)
    fn = compute_functionals(cp.path, config.sigma_sq)
    raw = raw_score(fn, lse_full(fn))
    est = estimate_change_point(raw, component, direction)
    return {
        "tau_hat": est.tau_hat,
        "abs_err": abs(est.tau_hat - config.scenario.tau),
    }


def _moment_combo(config: ExperimentConfig, combo_index: int) -> dict:
    x = config.x_values[combo_index // len(config.dt_values)]
    dt = config.dt_values[combo_index % len(config.dt_values)]
    rng = replication_rng(config.master_seed, combo_index)
    n = config.replications
    draws = sample_transition(config.params, np.full(n, float(x)), dt, rng)
    m1 = conditional_mean(config.params, x, dt)
    m2 = conditional_second_moment(config.params, x, dt)
    mean = float(draws.mean())
    se_mean = float(draws.std(ddof=1) / math.sqrt(n))
    sq = draws**2
    mean2 = float(sq.mean())
    se_mean2 = float(sq.std(ddof=1) / math.sqrt(n))
    return {
        "x": float(x),
        "dt": float(dt),
        "sample_mean": mean,
        "expected_mean": m1,
        "z_mean": (mean - m1) / se_mean,
        "sample_second_moment": mean2,
        "expected_second_moment": m2,
        "z_second_moment": (mean2 - m2) / se_mean2,
    }


_REPLICATION_WORKERS = {
    "size": _rep_size,
    "power": _rep_power,
    "drift": _rep_drift,
    "changepoint": _rep_changepoint,
}


def _run_one(args: tuple) -> dict:
    config, index = args
    if config.kind == "sampler-moments":
        return _moment_combo(config, index)
    worker = _REPLICATION_WORKERS[config.kind]
    rec = worker(config, replication_rng(config.master_seed, index))
    rec["rep"] = index
    return rec


# ---------------------------------------------------------------------------
# aggregation


def ks_distance(samples, cdf) -> float:
    """Sup distance between the empirical CDF of samples and cdf."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    f = np.array([cdf(v) for v in s])
    upper = np.max(np.arange(1, n + 1) / n - f)
    lower = np.max(f - np.arange(0, n) / n)
    return float(max(upper, lower))


def _aggregate(config: ExperimentConfig, records: list[dict]) -> dict:
    kind = config.kind
    if kind == "size":
        stats_a = [r["stat_a"] for r in records]
        stats_b = [r["stat_b"] for r in records]
        cdf = lambda x: 1.0 - two_sided_tail(x)  # noqa: E731
        return {
            "replications": len(records),
            "rejection_rate_a": float(np.mean([r["reject_a"] for r in records])),
            "rejection_rate_b": float(np.mean([r["reject_b"] for r in records])),
            "ks_distance_a": ks_distance(stats_a, cdf),
            "ks_distance_b": ks_distance(stats_b, cdf),
        }
    if kind == "power":
        return {
            "replications": len(records),
            "rejection_rate_two_sided": float(
                np.mean([r["reject_two"] for r in records])
            ),
            "rejection_rate_one_sided": float(
                np.mean([r["reject_one"] for r in records])
            ),
        }
    if kind == "drift":
        _, _, _, target = scenario_focus(config.scenario)
        mean_ext = float(np.mean([r["extremum_over_t"] for r in records]))
        return {
            "replications": len(records),
            "mean_extremum_over_t": mean_ext,
            "drift_target": target,
            "relative_error": abs(mean_ext / target - 1.0),
            "sign_match_rate": float(np.mean([r["sign_ok"] for r in records])),
        }
    if kind == "changepoint":
        errs = np.array([r["abs_err"] for r in records])
        return {
            "replications": len(records),
            "tau_true": config.scenario.tau,
            "abs_err_median": float(np.quantile(errs, 0.5)),
            "abs_err_q90": float(np.quantile(errs, 0.9)),
            "abs_err_max": float(errs.max()),
        }
    # sampler-moments
    return {
        "draws_per_combination": config.replications,
        "combinations": len(records),
        "max_abs_z_mean": float(max(abs(r["z_mean"]) for r in records)),
        "max_abs_z_second_moment": float(
            max(abs(r["z_second_moment"]) for r in records)
        ),
    }


@dataclass
class ExperimentReport:
    """Config echo, aggregates and (optionally) per-replication records."""

    kind: str
    config: dict
    aggregates: dict
    master_seed: int
    wall_clock_seconds: float
    per_rep: list = field(default_factory=list)

    def to_dict(self, deterministic: bool = False) -> dict:
        d = {
            "kind": self.kind,
            "config": self.config,
            "aggregates": self.aggregates,
            "master_seed": self.master_seed,
        }
        if not deterministic:
            d["wall_clock_seconds"] = self.wall_clock_seconds
        if self.per_rep:
            d["per_rep"] = self.per_rep
        return d

    def to_json(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_dict(deterministic=deterministic), indent=2)

    def write_per_rep_csv(self, filepath) -> None:
        if not self.per_rep:
            raise ValueError("report holds no per-replication records")
        keys = list(self.per_rep[0].keys())
        with open(filepath, "w") as f:
            f.write(",".join(keys) + "\n")
            for rec in self.per_rep:
                f.write(",".join(repr(rec[k]) for k in keys) + "\n")


def run_experiment(
    config: ExperimentConfig,
    n_jobs: int = 1,
    keep_per_rep: bool = False,
) -> ExperimentReport:
    """Run all replications of an experiment and aggregate.

    n_jobs > 1 distributes replications over processes; because every
    replication owns a generator seeded from (master_seed, index), the
    aggregates are identical whatever the schedule.
    """
    t_start = time.perf_counter()
    if config.kind == "sampler-moments":
        n_units = len(config.x_values) * len(config.dt_values)
    else:
        n_units = config.replications
    jobs = [(config, i) for i in range(n_units)]
    if n_jobs > 1 and n_units > 1:
        chunk = max(1, n_units // (8 * n_jobs))
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=chunk))
    else:
        records = [_run_one(job) for job in jobs]
    aggregates = _aggregate(config, records)
    return ExperimentReport(
        kind=config.kind,
        config=config.to_dict(),
        aggregates=aggregates,
        master_seed=config.master_seed,
        wall_clock_seconds=time.perf_counter() - t_start,
        per_rep=records if keep_per_rep else [],
    )
