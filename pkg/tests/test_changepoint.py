"""Change-point location and scenario analytics."""

import numpy as np
import pytest

from cirdetect import (
    ChangeScenario,
    compute_functionals,
    drift_phi,
    drift_psi,
    estimate_change_point,
    harmonic_blend,
    lse_full,
    raw_score,
    scenario_analytics,
    simulate_change_path,
    stationary_design,
    stationary_moment,
    theta_tilde,
    theta_tilde_blend,
)
from cirdetect.testprocess import RawScore


def score_of(values_comp1, times=None):
    v = np.asarray(values_comp1, dtype=float)
    t = np.arange(v.size, dtype=float) if times is None else np.asarray(times)
    return RawScore(times=t, values=np.column_stack([v, -v]))


def random_scenario(rng, shared_b=False, shared_a=False):
    a_pre, a_post, b_pre, b_post = np.exp(rng.uniform(-0.7, 0.9, size=4))
    if shared_b:
        b_post = b_pre
    if shared_a:
        a_post = a_pre
    return ChangeScenario(
        a_pre=a_pre,
        b_pre=b_pre,
        a_post=a_post,
        b_post=b_post,
        sigma=float(np.exp(rng.uniform(-0.7, 0.5))),
        rho=float(rng.uniform(0.1, 0.9)),
        horizon=100.0,
    )


class TestEstimateChangePoint:
    def test_unique_argmax(self):
        est = estimate_change_point(score_of([0, 1, 3, 2, 0]), 1, "down")
        assert est.tau_hat == 2.0
        assert est.achieved_value == 3.0
        assert est.component == 1 and est.direction == "down"

    def test_tie_resolves_to_first(self):
        est = estimate_change_point(score_of([0, 3, 3, 0]), 1, "down")
        assert est.tau_hat == 1.0

    def test_upward_uses_argmin(self):
        est = estimate_change_point(score_of([0, -1, -4, -2, 0]), 1, "up")
        assert est.tau_hat == 2.0
        assert est.achieved_value == -4.0

    def test_second_component(self):
        est = estimate_change_point(score_of([0, 1, 5, 0]), 2, "up")
        # second component of the synthetic score is the negation
        assert est.tau_hat == 2.0
        assert est.achieved_value == -5.0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            estimate_change_point(score_of([0, 1]), 3, "down")
        with pytest.raises(ValueError):
            estimate_change_point(score_of([0, 1]), 1, "sideways")

    def test_localizes_simulated_change(self):
        sc = ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=300.0)
        cp = simulate_change_path(sc, "stationary", 0.01, np.random.default_rng(55))
        fn = compute_functionals(cp.path)
        raw = raw_score(fn, lse_full(fn))
        est = estimate_change_point(raw, 1, "down")
        assert abs(est.tau_hat - 150.0) < 50.0


class TestThetaTilde:
    def test_fixed_point_when_no_change(self):
        sc = ChangeScenario(1.3, 0.8, 1.3, 0.8, 0.6, rho=0.4, horizon=10.0)
        np.testing.assert_allclose(theta_tilde(sc), [1.3, 0.8], rtol=1e-12)

    def test_midpoint_for_equal_designs(self):
        q = stationary_design(ChangeScenario(2, 1, 1, 1, 0.5, 0.5, 1.0).theta_pre)
        t1 = np.array([2.0, 1.0])
        t2 = np.array([0.5, 3.0])
        out = theta_tilde_blend(q, t1, q, t2, rho=0.5)
        np.testing.assert_allclose(out, (t1 + t2) / 2, rtol=1e-12)

    def test_against_dense_solve_oracle(self):
        rng = np.random.default_rng(31)
        scenarios = [ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=10.0)]
        scenarios += [random_scenario(rng) for _ in range(20)]
        for sc in scenarios:
            q1 = stationary_design(sc.theta_pre)
            q2 = stationary_design(sc.theta_post)
            blend = sc.rho * q1 + (1 - sc.rho) * q2
            rhs = sc.rho * q1 @ [sc.a_pre, sc.b_pre] + (1 - sc.rho) * q2 @ [
                sc.a_post,
                sc.b_post,
            ]
            oracle = np.linalg.solve(blend, rhs)
            np.testing.assert_allclose(theta_tilde(sc), oracle, rtol=1e-12)


class TestDriftConstants:
    def test_zero_when_parameter_unchanged(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            assert drift_psi(random_scenario(rng, shared_a=True)) == 0.0
            assert drift_phi(random_scenario(rng, shared_b=True)) == 0.0

    def test_equal_design_simplification(self):
        # ((Q/2)^{-1} + (Q/2)^{-1})^{-1} = Q/4, so psi = (a'-a'') * Q11 / 4
        q = stationary_design(ChangeScenario(1, 1, 1, 1, 1.0, 0.5, 1.0).theta_pre)
        h = harmonic_blend(q, q, rho=0.5)
        np.testing.assert_allclose(h, q / 4.0, rtol=1e-12)
        assert h[0, 0] == pytest.approx(0.25, rel=1e-12)

    def test_signs_follow_the_change(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            sc = random_scenario(rng)
            psi, phi = drift_psi(sc), drift_phi(sc)
            assert np.sign(psi) == np.sign(sc.a_pre - sc.a_post)
            assert np.sign(phi) == np.sign(sc.b_pre - sc.b_post)

    def test_decomposition_identities(self):
        # with b shared: (theta' - theta_tilde) . (1, -m1') = psi / rho
        #                (theta'' - theta_tilde) . (1, -m1'') = -psi / (1 - rho)
        rng = np.random.default_rng(43)
        for _ in range(25):
            sc = random_scenario(rng, shared_b=True)
            tt = theta_tilde(sc)
            psi = drift_psi(sc)
            m1_pre = stationary_moment(sc.theta_pre, 1.0)
            m1_post = stationary_moment(sc.theta_post, 1.0)
            lhs_pre = np.array([sc.a_pre, sc.b_pre]) - tt
            lhs_post = np.array([sc.a_post, sc.b_post]) - tt
            assert lhs_pre @ [1.0, -m1_pre] == pytest.approx(psi / sc.rho, abs=1e-10)
            assert lhs_post @ [1.0, -m1_post] == pytest.approx(
                -psi / (1 - sc.rho), abs=1e-10
            )

    def test_decomposition_identity_for_b_change(self):
        # with a shared: (theta' - theta_tilde) . (-m1', m2') = phi / rho
        rng = np.random.default_rng(47)
        for _ in range(25):
            sc = random_scenario(rng, shared_a=True)
            tt = theta_tilde(sc)
            phi = drift_phi(sc)
            m1 = stationary_moment(sc.theta_pre, 1.0)
            m2 = stationary_moment(sc.theta_pre, 2.0)
            lhs = np.array([sc.a_pre, sc.b_pre]) - tt
            assert lhs @ [-m1, m2] == pytest.approx(phi / sc.rho, abs=1e-10)


class TestScenarioAnalytics:
    def test_bundle_consistency(self):
        sc = ChangeScenario(2.0, 1.0, 1.0, 1.0, 0.5, rho=0.5, horizon=1000.0)
        an = scenario_analytics(sc)
        assert an.psi == pytest.approx(drift_psi(sc))
        assert an.phi == 0.0
        np.testing.assert_allclose(an.theta_tilde, theta_tilde(sc))
        np.testing.assert_allclose(an.q_pre, stationary_design(sc.theta_pre))
        np.testing.assert_allclose(an.q_post, stationary_design(sc.theta_post))
        # hand value: psi = 3/28 for this scenario
        assert an.psi == pytest.approx(3.0 / 28.0, rel=1e-12)
