"""Path functionals feeding the drift statistics.

One pass over a sampled path yields the cumulative trapezoid integrals of
X, X^2, X^3, the recovered (or supplied) sigma^2, and the cumulative Ito
integral of X against dX.  From these, the running design matrix Q_s, the
score vector d_s and the information matrix I_s are cheap array lookups:

    Q_s = [[s, -int X], [-int X, int X^2]]
    d_s = [X_s - X_0, -int X dX]
    I_s = sigma^2 * [[int X, -int X^2], [-int X^2, int X^3]]

The Ito integral is evaluated exclusively through the observability
identity int_0^s X dX = (X_s^2 - X_0^2 - sigma^2 int_0^s X du) / 2, which
is exact given sigma^2; no Riemann-Stieltjes sum is ever used for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePathError, SingularWindowError
from .sampler import SamplePath

# relative determinant tolerance below which a window counts as singular
SINGULARITY_RTOL = 1e-12


def _cumtrapz(y: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative composite-trapezoid integral on a uniform grid, from 0."""
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum((y[1:] + y[:-1]) * (0.5 * dx), out=out[1:])
    return out


def estimate_sigma_sq(path: SamplePath) -> float:
    """Recover sigma^2 as realized quadratic variation over int X dt.

    Sum of squared increments divided by the trapezoid integral of the
    path; converges to sigma^2 as the grid is refined.  A constant path
    returns 0; an identically zero path carries no volatility information
    and raises DegeneratePathError.
    """
    x = path.values
    denom = float(_cumtrapz(x, path.dt)[-1])
    if denom <= 0.0:
        raise DegeneratePathError(
            "cannot recover sigma^2: int X dt is zero (identically zero path)"
        )
    qv = float(np.sum(np.diff(x) ** 2))
    return qv / denom


def ito_integral(path: SamplePath, sigma_sq: float) -> np.ndarray:
    """Cumulative int_0^s X dX at every grid point, via the exact identity."""
    if sigma_sq < 0:
        raise DegeneratePathError(f"sigma_sq must be nonnegative, got {sigma_sq}")
    x = path.values
    cum_x = _cumtrapz(x, path.dt)
    return 0.5 * (x**2 - x[0] ** 2 - sigma_sq * cum_x)


@dataclass
class PathFunctionals:
    """Immutable bundle of cumulative functionals of one path.

    grid holds elapsed times s = 0, dt, ..., n*dt; all cumulative arrays
    are aligned with it.  q_at / d_at / info_at read the running objects
    at a grid index without interpolation.
    """

    grid: np.ndarray
    x: np.ndarray
    cum_x: np.ndarray
    cum_x2: np.ndarray
    cum_x3: np.ndarray
    cum_ito: np.ndarray
    sigma_sq: float
    dt: float
    t0: float = 0.0
    _det_q: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._det_q = self.grid * self.cum_x2 - self.cum_x**2

    @property
    def n_points(self) -> int:
        return self.grid.size

    @property
    def duration(self) -> float:
        return float(self.grid[-1])

    def index_of(self, s: float) -> int:
        """Grid index of elapsed time s; s must sit on the grid."""
        i = int(round(s / self.dt))
        if i < 0 or i >= self.n_points or abs(i * self.dt - s) > 1e-9 * max(
            self.dt, abs(s)
        ):
            raise ValueError(f"s={s} is not on the grid (dt={self.dt})")
        return i

    def q_at(self, i: int) -> np.ndarray:
        s = self.grid[i]
        cx = self.cum_x[i]
        return np.array([[s, -cx], [-cx, self.cum_x2[i]]])

    def d_at(self, i: int) -> np.ndarray:
        return np.array([self.x[i] - self.x[0], -self.cum_ito[i]])

    def info_at(self, i: int) -> np.ndarray:
        cx2 = self.cum_x2[i]
        return self.sigma_sq * np.array(
            [[self.cum_x[i], -cx2], [-cx2, self.cum_x3[i]]]
        )

    def det_q(self, i: int) -> float:
        return float(self._det_q[i])

    def singularity_threshold(self, i: int) -> float:
        return SINGULARITY_RTOL * float(self.grid[i] * self.cum_x2[i])

    def is_singular(self, i: int) -> bool:
        """Whether the window [0, s_i] is too degenerate to invert Q."""
        return self._det_q[i] <= self.singularity_threshold(i)

    def valid_window_mask(self) -> np.ndarray:
        """Boolean mask of grid points whose Q window clears the tolerance."""
        thresh = SINGULARITY_RTOL * (self.grid * self.cum_x2)
        return self._det_q > thresh

    def require_invertible(self, i: int) -> float:
        """det Q at index i, raising SingularWindowError below tolerance."""
        det = self.det_q(i)
        if self.is_singular(i):
            raise SingularWindowError(
                f"design matrix at s={self.grid[i]} is numerically singular "
                f"(det={det:.3e})",
                det_q=det,
            )
        return det


def compute_functionals(path: SamplePath, sigma_sq="auto") -> PathFunctionals:
    """Build all cumulative functionals of a path in one pass.

    sigma_sq="auto" recovers the volatility by realized quadratic
    variation; pass a number instead when the true sigma is known.
    """
    if sigma_sq == "auto":
        sig2 = estimate_sigma_sq(path)
    else:
        sig2 = float(sigma_sq)
        if sig2 < 0:
            raise DegeneratePathError(f"sigma_sq must be nonnegative, got {sig2}")
    x = path.values
    dt = path.dt
    cum_x = _cumtrapz(x, dt)
    cum_x2 = _cumtrapz(x**2, dt)
    cum_x3 = _cumtrapz(x**3, dt)
    cum_ito = 0.5 * (x**2 - x[0] ** 2 - sig2 * cum_x)
    grid = dt * np.arange(x.size)
    return PathFunctionals(
        grid=grid,
        x=x,
        cum_x=cum_x,
        cum_x2=cum_x2,
        cum_x3=cum_x3,
        cum_ito=cum_ito,
        sigma_sq=sig2,
        dt=dt,
        t0=path.t0,
    )
