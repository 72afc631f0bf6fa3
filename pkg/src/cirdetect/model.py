"""CIR model parameterization and its exact moment structure.

The process is dX = (a - b*X) dt + sigma*sqrt(X) dW with a, b, sigma > 0,
which keeps X nonnegative and ergodic.  Its stationary law is
Gamma(shape=2a/sigma^2, rate=2b/sigma^2), and the conditional mean and
second moment are available in closed form.  These closed forms are the
oracles against which the samplers and estimators are validated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class CirParams:
    """Drift/volatility triple (a, b, sigma) of the square-root diffusion.

    a is the mean-reversion target scale, b the reversion speed (1/time),
    sigma the volatility.  All three must be strictly positive; that is
    the ergodic regime and the only one supported here.
    """

    a: float
    b: float
    sigma: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.sigma > 0):
            raise DomainError(
                f"CIR parameters must be strictly positive, got "
                f"a={self.a}, b={self.b}, sigma={self.sigma}"
            )
        if not all(map(math.isfinite, (self.a, self.b, self.sigma))):
            raise DomainError("CIR parameters must be finite")

    @property
    def long_run_mean(self) -> float:
        return self.a / self.b


@dataclass(frozen=True)
class StationaryLaw:
    """Gamma(shape, rate) stationary distribution of the CIR process."""

    shape: float
    rate: float

    def moment(self, order: float) -> float:
        """E(X^order) under the stationary law.

        Defined for order > -shape; the moment diverges at and below
        -shape.  Evaluated through log-Gamma for stability at large shape.
        """
        if order <= -self.shape:
            raise DomainError(
                f"stationary moment of order {order} diverges "
                f"(requires order > {-self.shape})"
            )
        log_m = (
            math.lgamma(self.shape + order)
            - math.lgamma(self.shape)
            - order * math.log(self.rate)
        )
        return math.exp(log_m)


def stationary_law(params: CirParams) -> StationaryLaw:
    """Stationary Gamma law: shape 2a/sigma^2, rate 2b/sigma^2."""
    s2 = params.sigma**2
    return StationaryLaw(shape=2.0 * params.a / s2, rate=2.0 * params.b / s2)


def stationary_moment(params: CirParams, order: float) -> float:
    """Stationary moment E(X^order); order 1 equals a/b exactly."""
    return stationary_law(params).moment(order)


def conditional_mean(params: CirParams, x0: float, dt: float) -> float:
    """E(X_dt | X_0 = x0) = x0*e^{-b*dt} + (a/b)*(1 - e^{-b*dt})."""
    if dt < 0:
        raise DomainError(f"dt must be nonnegative, got {dt}")
    if x0 < 0:
        raise DomainError(f"x0 must be nonnegative, got {x0}")
    q = math.exp(-params.b * dt)
    return x0 * q + params.long_run_mean * (1.0 - q)


def conditional_second_moment(params: CirParams, x0: float, dt: float) -> float:
    """E(X_dt^2 | X_0 = x0) in closed form.

    With q = e^{-b*dt}:

        x0^2*q^2 + (2a + sigma^2) * [ x0*(q - q^2)/b
                                      + a*(1 - q)^2 / (2 b^2) ]

    which interpolates x0^2 at dt = 0 and a(2a + sigma^2)/(2 b^2), the
    stationary second moment, as dt -> infinity.
    """
    if dt < 0:
        raise DomainError(f"dt must be nonnegative, got {dt}")
    if x0 < 0:
        raise DomainError(f"x0 must be nonnegative, got {x0}")
    a, b, s2 = params.a, params.b, params.sigma**2
    q = math.exp(-b * dt)
    return (
        x0 * x0 * q * q
        + (2.0 * a + s2) * (x0 * (q - q * q) / b + a * (1.0 - q) ** 2 / (2.0 * b * b))
    )


def stationary_design(params: CirParams) -> np.ndarray:
    """Stationary design matrix [[1, -m1], [-m1, m2]].

    m1 and m2 are the first two stationary moments.  The matrix is
    symmetric positive definite for every valid parameter triple
    (its determinant is the stationary variance).
    """
    law = stationary_law(params)
    m1 = law.moment(1.0)
    m2 = law.moment(2.0)
    return np.array([[1.0, -m1], [-m1, m2]])
