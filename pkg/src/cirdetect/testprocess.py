"""The normalized two-component test trajectory.

The raw score at window end s is the cumulative estimated-martingale
integral d_s - Q_s theta_hat, with first component

    X_s - X_0 - int_0^s (a_hat - b_hat X) du

and second component -int_0^s X dX + int_0^s X (a_hat - b_hat X) du.  The
test trajectory rescales the raw score at s = t*T by the inverse square
root of the full-sample information matrix; under a fixed-parameter path it
converges to a 2-dimensional standard Brownian bridge, which pins both
endpoints at zero.

An algebraically equivalent CUSUM form, I_T^{-1/2} Q_{tT} (theta_hat_{tT} -
theta_hat_T), is provided for cross-validation; it is only defined where
the sub-window design matrix is invertible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MatrixDomainError
from .estimator import ThetaHat, lse_full
from .pathfun import PathFunctionals


@dataclass
class RawScore:
    """Unnormalized cumulative score: times are elapsed s in [0, T]."""

    times: np.ndarray
    values: np.ndarray  # shape (n+1, 2)


@dataclass
class TestTrajectory:
    """Normalized trajectory on a [0, 1] grid, plus the matrix used."""

    __test__ = False  # Test prefix is API, not a pytest class

    t_grid: np.ndarray
    values: np.ndarray  # shape (m+1, 2)
    info_T: np.ndarray

    def component(self, index: int) -> np.ndarray:
        """1-based component accessor (1 = a-score, 2 = b-score)."""
        return self.values[:, index - 1]


def inv_sqrt_2x2(m: np.ndarray) -> np.ndarray:
    """Principal inverse square root of a symmetric positive definite 2x2.

    Uses the closed form sqrt(M) = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))
    followed by an adjugate inversion; the result S is symmetric and
    satisfies S @ S = M^{-1}.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (2, 2):
        raise MatrixDomainError(f"expected a 2x2 matrix, got shape {m.shape}")
    scale = max(abs(m[0, 0]), abs(m[1, 1]), abs(m[0, 1]), abs(m[1, 0]))
    if abs(m[0, 1] - m[1, 0]) > 1e-8 * max(scale, 1.0):
        raise MatrixDomainError("matrix is not symmetric")
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if det <= 0 or tr <= 0:
        raise MatrixDomainError(
            f"matrix is not positive definite (tr={tr:.3e}, det={det:.3e})"
        )
    s = math.sqrt(det)
    t = math.sqrt(tr + 2.0 * s)
    sq00 = (m[0, 0] + s) / t
    sq01 = m[0, 1] / t
    sq11 = (m[1, 1] + s) / t
    # det(sqrt(M)) = sqrt(det(M)) = s
    return np.array([[sq11, -sq01], [-sq01, sq00]]) / s


def _theta_array(theta) -> np.ndarray:
    if isinstance(theta, ThetaHat):
        return theta.as_array()
    arr = np.asarray(theta, dtype=float)
    if arr.shape != (2,):
        raise ValueError("theta must be a ThetaHat or a length-2 vector")
    return arr


def raw_score(fn: PathFunctionals, theta) -> RawScore:
    """Cumulative d_s - Q_s theta at every grid point.

    theta is normally the full-sample estimate, in which case the score
    vanishes at s = 0 and s = T; any fixed reference vector is accepted,
    shifting the score by the computable linear term -Q_s (theta - theta_hat).
    """
    a, b = _theta_array(theta)
    comp1 = (fn.x - fn.x[0]) - a * fn.grid + b * fn.cum_x
    comp2 = -fn.cum_ito + a * fn.cum_x - b * fn.cum_x2
    return RawScore(times=fn.grid.copy(), values=np.column_stack([comp1, comp2]))


def _grid_indices(n_steps: int, m: int | None) -> np.ndarray:
    if m is None:
        m = n_steps
    if not (1 <= m <= n_steps):
        raise ValueError(f"grid size m must be in [1, {n_steps}], got {m}")
    return np.round(np.arange(m + 1) * (n_steps / m)).astype(int)


def test_trajectory(
    fn: PathFunctionals,
    m: int | None = None,
    theta: ThetaHat | None = None,
) -> TestTrajectory:
    """Normalized test trajectory on t in {0, 1/m, ..., 1}.

    Defaults to one statistic point per sample (m = number of path steps)
    and the full-sample drift estimate.  Raises MatrixDomainError if the
    full-sample information matrix is not positive definite.
    """
    n_steps = fn.n_points - 1
    idx = _grid_indices(n_steps, m)
    if theta is None:
        theta = lse_full(fn)
    info = fn.info_at(fn.n_points - 1)
    s_mat = inv_sqrt_2x2(info)
    raw = raw_score(fn, theta)
    # s_mat is symmetric, so row-wise application is a right-multiply
    values = raw.values[idx] @ s_mat
    return TestTrajectory(t_grid=idx / n_steps, values=values, info_T=info)


# the test_ prefix is API, not a pytest test
test_trajectory.__test__ = False


def cusum_trajectory(fn: PathFunctionals, m: int | None = None) -> TestTrajectory:
    """The CUSUM form I_T^{-1/2} Q_{tT} (theta_hat_{tT} - theta_hat_T).

    Grid points whose sub-window design matrix falls below the singularity
    tolerance (always including t = 0) are reported as NaN rows; everywhere
    else the result agrees with test_trajectory to rounding.
    """
    n_steps = fn.n_points - 1
    idx = _grid_indices(n_steps, m)
    theta_t = lse_full(fn).as_array()
    s_mat = inv_sqrt_2x2(fn.info_at(fn.n_points - 1))

    s = fn.grid[idx]
    cx = fn.cum_x[idx]
    cx2 = fn.cum_x2[idx]
    d1 = fn.x[idx] - fn.x[0]
    d2 = -fn.cum_ito[idx]
    det = s * cx2 - cx**2
    valid = fn.valid_window_mask()[idx]

    values = np.full((idx.size, 2), np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        a_hat = (cx2 * d1 + cx * d2) / det
        b_hat = (cx * d1 + s * d2) / det
    da = a_hat - theta_t[0]
    db = b_hat - theta_t[1]
    w1 = s * da - cx * db
    w2 = -cx * da + cx2 * db
    stacked = np.column_stack([w1, w2]) @ s_mat
    values[valid] = stacked[valid]
    return TestTrajectory(
        t_grid=idx / n_steps, values=values, info_T=fn.info_at(fn.n_points - 1)
    )
