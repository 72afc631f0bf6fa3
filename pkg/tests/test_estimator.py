"""Continuous-record LSE and the discrete cross-check."""

import numpy as np
import pytest

from cirdetect import (
    CirParams,
    SamplePath,
    SingularWindowError,
    compute_functionals,
    lse_at,
    lse_discrete,
    lse_full,
    simulate_path,
)

P = CirParams(1.0, 1.0, 0.5)


class TestLseContinuous:
    def test_constant_path_is_singular(self):
        fn = compute_functionals(
            SamplePath(0.0, 0.05, np.full(201, 2.0)), sigma_sq=0.25
        )
        with pytest.raises(SingularWindowError) as err:
            lse_full(fn)
        assert hasattr(err.value, "det_q")

    def test_exponential_decay_path(self):
        # X_t = e^{-t} solves dX = (0 - 1*X) dt, so the estimate is (0, 1)
        # up to trapezoid quadrature error
        t = np.arange(0, 5.0 + 1e-12, 1e-4)
        path = SamplePath(0.0, 1e-4, np.exp(-t))
        fn = compute_functionals(path, sigma_sq=0.0)
        theta = lse_full(fn)
        assert abs(theta.a_hat - 0.0) < 1e-3
        assert abs(theta.b_hat - 1.0) < 1e-3

    def test_consistency_on_long_path(self):
        path = simulate_path(P, "stationary", 2000.0, 0.01, np.random.default_rng(17))
        theta = lse_full(compute_functionals(path))
        err = np.hypot(theta.a_hat - 1.0, theta.b_hat - 1.0)
        assert err < 0.1

    def test_solve_contract(self):
        # re-applying Q to the solution returns d to relative 1e-10
        path = simulate_path(P, 1.0, 50.0, 0.01, np.random.default_rng(18))
        fn = compute_functionals(path)
        for s in (1.0, 10.0, 50.0):
            i = fn.index_of(s)
            theta = lse_at(fn, s)
            recomposed = fn.q_at(i) @ theta.as_array()
            np.testing.assert_allclose(recomposed, fn.d_at(i), rtol=1e-10, atol=1e-12)

    def test_window_metadata(self):
        path = simulate_path(P, 1.0, 20.0, 0.01, np.random.default_rng(19))
        fn = compute_functionals(path)
        theta = lse_at(fn, 10.0)
        assert theta.window_end == pytest.approx(10.0)
        assert theta.det_q > 0

    def test_off_grid_time_rejected(self):
        path = simulate_path(P, 1.0, 5.0, 0.01, np.random.default_rng(20))
        fn = compute_functionals(path)
        with pytest.raises(ValueError):
            lse_at(fn, 2.0051)


class TestLseDiscrete:
    def test_hand_solved_example(self):
        a_hat, b_hat = lse_discrete([0.0, 1.0, 0.0])
        assert a_hat == pytest.approx(1.0, rel=1e-12)
        assert b_hat == pytest.approx(2.0, rel=1e-12)

    def test_constant_observations_singular(self):
        with pytest.raises(SingularWindowError):
            lse_discrete([2.0, 2.0, 2.0, 2.0])

    def test_too_short(self):
        with pytest.raises(ValueError):
            lse_discrete([1.0])

    def test_rough_agreement_with_continuous(self):
        # unit-lag discrete estimates target a coarser discretization of the
        # same drift; expect the right sign and order of magnitude only
        path = simulate_path(P, "stationary", 2000.0, 0.01, np.random.default_rng(23))
        a_disc, b_disc = lse_discrete(path.values[::100])
        theta = lse_full(compute_functionals(path))
        assert a_disc > 0 and b_disc > 0
        assert abs(a_disc - theta.a_hat) / theta.a_hat < 0.5
        assert abs(b_disc - theta.b_hat) / theta.b_hat < 0.5
