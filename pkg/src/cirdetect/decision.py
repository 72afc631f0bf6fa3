"""Boundary-crossing laws of the standard Brownian bridge and the tests
built on them.

One-sided tests compare the running maximum (or minimum) of a trajectory
component against the tail of sup B, P(sup B >= x) = exp(-2 x^2); two-sided
tests use the Kolmogorov law P(sup |B| >= x) = 2 sum_k (-1)^{k-1}
exp(-2 k^2 x^2).  Testing both drift parameters simultaneously applies a
Bonferroni split of the level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .testprocess import TestTrajectory

_SIDES = ("upper", "lower", "two-sided")
_SERIES_EPS = 1e-12


def _canonical_side(side: str) -> str:
    if side == "two":
        return "two-sided"
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES} (or 'two'), got {side!r}")
    return side


def one_sided_tail(x: float) -> float:
    """P(sup_{[0,1]} B_t >= x) = exp(-2 x^2) for x >= 0.

    By symmetry this is also P(inf B_t <= -x).
    """
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    return math.exp(-2.0 * x * x)


def two_sided_tail(x: float) -> float:
    """P(sup_{[0,1]} |B_t| >= x): alternating series truncated at 1e-12.

    Below x = 0.01 the tail is 1 to double precision, so 1.0 is returned
    directly rather than summing a slowly converging series.
    """
    if x < 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if x < 1e-2:
        return 1.0
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        if term < _SERIES_EPS:
            break
        total += sign * term
        sign = -sign
        k += 1
    return min(max(2.0 * total, 0.0), 1.0)


def critical_value(alpha: float, side: str) -> float:
    """Boundary value whose crossing probability equals alpha.

    upper/lower sides have the closed form sqrt(-ln(alpha) / 2); the
    two-sided value is found by bisection on the Kolmogorov series to an
    absolute tolerance of 1e-10.
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    side = _canonical_side(side)
    if side in ("upper", "lower"):
        return math.sqrt(-math.log(alpha) / 2.0)
    lo, hi = 1e-3, 10.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if two_sided_tail(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TestSpec:
    """Which parameter to test, on which side, at which level."""

    __test__ = False  # Test prefix is API, not a pytest class

    parameter: str  # "a", "b" or "both"
    side: str  # "upper", "lower" or "two-sided" (alias "two")
    alpha: float

    def __post_init__(self):
        if self.parameter not in ("a", "b", "both"):
            raise DomainError(f"parameter must be a, b or both, got {self.parameter!r}")
        object.__setattr__(self, "side", _canonical_side(self.side))
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class Decision:
    """Outcome of one test: reject iff p_value < alpha iff the statistic
    crosses the critical value in the direction of the side."""

    parameter: str
    side: str
    alpha: float
    component: int  # 1 = a-score, 2 = b-score
    statistic: float
    critical_value: float
    p_value: float
    reject: bool


def _decide_component(
    traj: TestTrajectory, parameter: str, side: str, alpha: float
) -> Decision:
    component = 1 if parameter == "a" else 2
    values = traj.component(component)
    cv = critical_value(alpha, side)
    if side == "upper":
        stat = float(values.max())
        p = one_sided_tail(max(stat, 0.0))
        reject = stat > cv
    elif side == "lower":
        stat = float(values.min())
        p = one_sided_tail(max(-stat, 0.0))
        reject = stat < -cv
    else:
        stat = float(abs(values).max())
        p = two_sided_tail(stat)
        reject = stat > cv
    return Decision(
        parameter=parameter,
        side=side,
        alpha=alpha,
        component=component,
        statistic=stat,
        critical_value=cv,
        p_value=p,
        reject=reject,
    )


def run_test(traj: TestTrajectory, spec: TestSpec):
    """Run the requested test on a computed trajectory.

    For parameter "both" the level is Bonferroni-split (alpha/2 per
    component) and a pair of Decisions is returned, one per parameter.
    """
    if spec.parameter == "both":
        half = spec.alpha / 2.0
        return (
            _decide_component(traj, "a", spec.side, half),
            _decide_component(traj, "b", spec.side, half),
        )
    return _decide_component(traj, spec.parameter, spec.side, spec.alpha)
