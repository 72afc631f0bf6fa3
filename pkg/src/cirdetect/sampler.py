"""Exact path simulation for the CIR process, under no-change and
single-change regimes.

The transition X_{t+dt} | X_t = x is c * noncentral-chi-square(nu, lam) with

    c   = sigma^2 * (1 - e^{-b dt}) / (4 b)
    nu  = 4 a / sigma^2
    lam = x * e^{-b dt} / c

Sampling uses the Poisson mixture of central chi-squares (K ~ Poisson(lam/2)
then chi2_{nu+2K}), which is exact for every nu > 0, including nu < 1.
An Euler-Maruyama step with full truncation at zero is provided purely as a
cross-validation reference; it is never the default scheme.

All randomness flows through an explicit numpy Generator, so a seed plus the
call sequence fully determines the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import CirParams, stationary_law

RandomSource = np.random.Generator


@dataclass
class SamplePath:
    """Uniformly sampled nonnegative trajectory on [t0, t0 + n*dt]."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.dt <= 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if self.values.ndim != 1 or self.values.size < 2:
            raise DomainError("a path needs at least two grid points")
        if np.any(self.values < 0):
            raise DomainError("path values must be nonnegative")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.values.size - 1)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ChangeScenario:
    """Pre/post drift parameters with a single change at tau = rho * horizon.

    sigma is shared across the change: the volatility is observable from the
    path and is not part of what the tests monitor.
    """

    a_pre: float
    b_pre: float
    a_post: float
    b_post: float
    sigma: float
    rho: float
    horizon: float

    def __post_init__(self):
        # triggers positivity validation on both parameter pairs
        self.theta_pre
        self.theta_post
        if not (0.0 < self.rho < 1.0):
            raise DomainError(f"rho must lie in (0, 1), got {self.rho}")
        if self.horizon <= 0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")

    @property
    def theta_pre(self) -> CirParams:
        return CirParams(self.a_pre, self.b_pre, self.sigma)

    @property
    def theta_post(self) -> CirParams:
        return CirParams(self.a_post, self.b_post, self.sigma)

    @property
    def tau(self) -> float:
        return self.rho * self.horizon


@dataclass
class ChangePath:
    """A simulated change path plus the bookkeeping of where the change hit.

    tau_true is rho*T from the scenario; tau_grid is the grid time actually
    used (nearest grid point), and change_index its index.
    """

    path: SamplePath
    change_index: int
    tau_true: float
    tau_grid: float


def _transition_constants(params: CirParams, dt: float) -> tuple[float, float, float]:
    """(c, nu, decay) for a step of size dt; decay = e^{-b dt}."""
    decay = math.exp(-params.b * dt)
    c = params.sigma**2 * (1.0 - decay) / (4.0 * params.b)
    nu = 4.0 * params.a / params.sigma**2
    return c, nu, decay


def sample_transition(params: CirParams, x, dt: float, rng: RandomSource):
    """Draw X_{t+dt} | X_t = x from the exact transition law.

    x may be a scalar or an array; one independent draw is made per entry.
    The output is nonnegative and, in expectation, matches the closed-form
    conditional moments of the model module.
    """
    if dt <= 0 or not math.isfinite(dt):
        raise DomainError(f"dt must be positive and finite, got {dt}")
    x_arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x_arr)) or np.any(x_arr < 0):
        raise DomainError("x must be finite and nonnegative")
    c, nu, decay = _transition_constants(params, dt)
    lam = x_arr * (decay / c)
    k = rng.poisson(0.5 * lam)
    out = c * rng.chisquare(nu + 2.0 * k)
    if x_arr.ndim == 0:
        return float(out)
    return out


def simulate_path(
    params: CirParams,
    x0,
    t_end: float,
    dt: float,
    rng: RandomSource,
) -> SamplePath:
    """Simulate an exact CIR path on the grid 0, dt, ..., floor(t_end/dt)*dt.

    x0 is either a nonnegative number or the string "stationary", in which
    case X_0 is drawn from the Gamma stationary law (making the whole path
    strictly stationary).
    """
    if dt <= 0 or t_end < dt:
        raise DomainError(f"need t_end >= dt > 0, got t_end={t_end}, dt={dt}")
    n = int(math.floor(t_end / dt + 1e-9))
    if x0 == "stationary":
        law = stationary_law(params)
        x = float(rng.gamma(law.shape, 1.0 / law.rate))
    else:
        x = float(x0)
        if x < 0 or not math.isfinite(x):
            raise DomainError(f"x0 must be finite and nonnegative, got {x0}")

    c, nu, decay_over_c = _transition_constants(params, dt)
    decay_over_c = decay_over_c / c
    values = np.empty(n + 1)
    values[0] = x
    poisson = rng.poisson
    chisquare = rng.chisquare
    for i in range(1, n + 1):
        # same two draws per step as sample_transition, so streams agree
        k = poisson(0.5 * x * decay_over_c)
        x = c * chisquare(nu + 2.0 * k)
        values[i] = x
    return SamplePath(t0=0.0, dt=dt, values=values)


def simulate_change_path(
    scenario: ChangeScenario,
    x0,
    dt: float,
    rng: RandomSource,
) -> ChangePath:
    """Simulate a path whose drift parameters switch at tau = rho * T.

    The switch is applied at the grid point nearest tau: steps leaving grid
    indices < change_index use the pre parameters, later steps the post
    parameters.  Both the intended tau and the grid tau are recorded.
    """
    if dt <= 0 or scenario.horizon < dt:
        raise DomainError(
            f"need horizon >= dt > 0, got horizon={scenario.horizon}, dt={dt}"
        )
    n = int(math.floor(scenario.horizon / dt + 1e-9))
    change_index = int(round(scenario.tau / dt))
    change_index = min(max(change_index, 0), n)

    if x0 == "stationary":
        law = stationary_law(scenario.theta_pre)
        x = float(rng.gamma(law.shape, 1.0 / law.rate))
    else:
        x = float(x0)
        if x < 0 or not math.isfinite(x):
            raise DomainError(f"x0 must be finite and nonnegative, got {x0}")

    c1, nu1, d1 = _transition_constants(scenario.theta_pre, dt)
    c2, nu2, d2 = _transition_constants(scenario.theta_post, dt)
    d1, d2 = d1 / c1, d2 / c2
    values = np.empty(n + 1)
    values[0] = x
    poisson = rng.poisson
    chisquare = rng.chisquare
    for i in range(1, n + 1):
        if i <= change_index:
            k = poisson(0.5 * x * d1)
            x = c1 * chisquare(nu1 + 2.0 * k)
        else:
            k = poisson(0.5 * x * d2)
            x = c2 * chisquare(nu2 + 2.0 * k)
        values[i] = x
    path = SamplePath(t0=0.0, dt=dt, values=values)
    return ChangePath(
        path=path,
        change_index=change_index,
        tau_true=scenario.tau,
        tau_grid=change_index * dt,
    )


def euler_step(params: CirParams, x, dt: float, rng: RandomSource):
    """One Euler-Maruyama step with full truncation at zero.

    Diagnostic reference scheme only: max(0, x + (a - b x) dt
    + sigma sqrt(x) sqrt(dt) Z).  Accepts scalar or array x.
    """
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    x_arr = np.asarray(x, dtype=float)
    z = rng.standard_normal(size=x_arr.shape if x_arr.ndim else None)
    step = (
        x_arr
        + (params.a - params.b * x_arr) * dt
        + params.sigma * np.sqrt(x_arr) * math.sqrt(dt) * z
    )
    out = np.maximum(step, 0.0)
    if x_arr.ndim == 0:
        return float(out)
    return out
