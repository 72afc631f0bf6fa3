"""Least-squares drift estimation from a continuously observed path.

The estimator solves the 2x2 system Q_s theta = d_s, where Q_s and d_s come
from PathFunctionals.  The solve is the explicit adjugate formula; the
determinant is surfaced as a conditioning diagnostic.  A discrete-time LSE
on raw observations is included as a cross-check of the same normal
equations at lag one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularWindowError
from .pathfun import PathFunctionals


@dataclass(frozen=True)
class ThetaHat:
    """Drift estimate over the window [0, window_end], with det Q attached."""

    a_hat: float
    b_hat: float
    window_end: float
    det_q: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a_hat, self.b_hat])


def lse_at(fn: PathFunctionals, s: float) -> ThetaHat:
    """Continuous-time LSE of (a, b) over [0, s], for s on the grid.

    Solves Q_s theta = d_s by the closed-form 2x2 inverse.  Raises
    SingularWindowError (carrying det Q) when the window is numerically
    singular, e.g. on a constant path.
    """
    i = fn.index_of(s)
    return lse_at_index(fn, i)


def lse_at_index(fn: PathFunctionals, i: int) -> ThetaHat:
    """lse_at addressed by grid index rather than time."""
    det = fn.require_invertible(i)
    s = fn.grid[i]
    cx = fn.cum_x[i]
    cx2 = fn.cum_x2[i]
    d1 = fn.x[i] - fn.x[0]
    d2 = -fn.cum_ito[i]
    # adjugate of [[s, -cx], [-cx, cx2]] is [[cx2, cx], [cx, s]]
    a_hat = (cx2 * d1 + cx * d2) / det
    b_hat = (cx * d1 + s * d2) / det
    return ThetaHat(a_hat=float(a_hat), b_hat=float(b_hat), window_end=float(s), det_q=det)


def lse_full(fn: PathFunctionals) -> ThetaHat:
    """The full-sample estimate: lse_at at the final grid point."""
    return lse_at_index(fn, fn.n_points - 1)


def lse_discrete(observations) -> tuple[float, float]:
    """Discrete-time LSE of (a, b) from unit-lag observations X_0, ..., X_n.

    Exact solution of the normal equations

        [[n, -sum X_{i-1}], [-sum X_{i-1}, sum X_{i-1}^2]] theta
            = [sum dX_i, -sum dX_i X_{i-1}]

    Raises SingularWindowError when the design is singular (constant data).
    """
    x = np.asarray(observations, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least two observations")
    prev = x[:-1]
    dx = np.diff(x)
    n = prev.size
    sx = float(np.sum(prev))
    sxx = float(np.sum(prev**2))
    det = n * sxx - sx * sx
    if det <= 0:
        raise SingularWindowError(
            f"discrete design is singular (det={det:.3e})", det_q=det
        )
    d1 = float(np.sum(dx))
    d2 = -float(np.sum(dx * prev))
    a_hat = (sxx * d1 + sx * d2) / det
    b_hat = (sx * d1 + n * d2) / det
    return a_hat, b_hat
