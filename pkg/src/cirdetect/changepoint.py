"""Change-point location and the deterministic drift analytics of a
single-change scenario.

The change-point estimate is the first time the chosen raw-score component
attains its extremum: the maximum when the drift shifts downward (the score
drifts up to a peak at the change), the minimum for an upward shift.

For a scenario (theta', theta'', rho) the long-run blend estimate is

    theta_tilde = (rho Q' + (1-rho) Q'')^{-1} (rho Q' theta' + (1-rho) Q'' theta''),

and the per-unit-time drifts of the two raw-score components are the
quadratic forms

    psi = (a' - a'') e1' ((rho Q')^{-1} + ((1-rho) Q'')^{-1})^{-1} e1
    phi = (b' - b'') e2' ((rho Q')^{-1} + ((1-rho) Q'')^{-1})^{-1} e2

whose signs equal the signs of a' - a'' and b' - b'' respectively, because
the inner matrix is symmetric positive definite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MatrixDomainError
from .model import stationary_design
from .sampler import ChangeScenario
from .testprocess import RawScore

_DIRECTIONS = ("up", "down")


@dataclass(frozen=True)
class ChangePointEstimate:
    """First time the score component attains its extremum."""

    tau_hat: float
    achieved_value: float
    direction: str
    component: int


@dataclass(frozen=True)
class ScenarioAnalytics:
    """Derived quantities of a change scenario."""

    theta_tilde: np.ndarray
    psi: float
    phi: float
    q_pre: np.ndarray
    q_post: np.ndarray


def estimate_change_point(
    raw: RawScore, component: int, direction: str
) -> ChangePointEstimate:
    """Locate the change from a full-sample raw score.

    component is 1 (a-score) or 2 (b-score); direction "down" means the
    parameter decreased (score peaks, take the first argmax), "up" the
    mirror case (first argmin).  Always well defined on a finite grid;
    ties resolve to the earliest time.
    """
    if component not in (1, 2):
        raise ValueError(f"component must be 1 or 2, got {component}")
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    values = raw.values[:, component - 1]
    idx = int(np.argmax(values)) if direction == "down" else int(np.argmin(values))
    return ChangePointEstimate(
        tau_hat=float(raw.times[idx]),
        achieved_value=float(values[idx]),
        direction=direction,
        component=component,
    )


def _inv2(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det <= 0:
        raise MatrixDomainError(f"2x2 matrix is not invertible SPD (det={det:.3e})")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def _solve2(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return _inv2(m) @ rhs


def theta_tilde_blend(
    q_pre: np.ndarray,
    theta_pre: np.ndarray,
    q_post: np.ndarray,
    theta_post: np.ndarray,
    rho: float,
) -> np.ndarray:
    """Solve (rho Q' + (1-rho) Q'') x = rho Q' theta' + (1-rho) Q'' theta''.

    With equal design matrices and rho = 1/2 this is the plain average of
    the two parameter vectors.
    """
    blend = rho * q_pre + (1.0 - rho) * q_post
    rhs = rho * (q_pre @ np.asarray(theta_pre)) + (1.0 - rho) * (
        q_post @ np.asarray(theta_post)
    )
    return _solve2(blend, rhs)


def theta_tilde(scenario: ChangeScenario) -> np.ndarray:
    """Long-run blend of the pre and post drift parameters."""
    return theta_tilde_blend(
        stationary_design(scenario.theta_pre),
        np.array([scenario.a_pre, scenario.b_pre]),
        stationary_design(scenario.theta_post),
        np.array([scenario.a_post, scenario.b_post]),
        scenario.rho,
    )


def harmonic_blend(q_pre: np.ndarray, q_post: np.ndarray, rho: float) -> np.ndarray:
    """((rho Q')^{-1} + ((1-rho) Q'')^{-1})^{-1}; SPD whenever both inputs are."""
    inner = _inv2(rho * np.asarray(q_pre)) + _inv2((1.0 - rho) * np.asarray(q_post))
    return _inv2(inner)


def _scenario_blend(scenario: ChangeScenario) -> np.ndarray:
    return harmonic_blend(
        stationary_design(scenario.theta_pre),
        stationary_design(scenario.theta_post),
        scenario.rho,
    )


def drift_psi(scenario: ChangeScenario) -> float:
    """Per-unit-time drift of the first raw-score component.

    Zero iff a' = a''; positive for a downward change in a, negative for
    an upward one.
    """
    return float((scenario.a_pre - scenario.a_post) * _scenario_blend(scenario)[0, 0])


def drift_phi(scenario: ChangeScenario) -> float:
    """Per-unit-time drift of the second raw-score component (sign of b'-b'')."""
    return float((scenario.b_pre - scenario.b_post) * _scenario_blend(scenario)[1, 1])


def scenario_analytics(scenario: ChangeScenario) -> ScenarioAnalytics:
    """theta_tilde, psi, phi and the two design matrices in one bundle."""
    return ScenarioAnalytics(
        theta_tilde=theta_tilde(scenario),
        psi=drift_psi(scenario),
        phi=drift_phi(scenario),
        q_pre=stationary_design(scenario.theta_pre),
        q_post=stationary_design(scenario.theta_post),
    )
