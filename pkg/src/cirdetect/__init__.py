"""Offline change detection for the Cox-Ingersoll-Ross diffusion.

Exact path simulation, continuous-record least-squares drift estimation,
Brownian-bridge CUSUM tests for changes in the drift pair (a, b), a
change-point estimator, and a seeded Monte Carlo harness.
"""

from .changepoint import (
    ChangePointEstimate,
    ScenarioAnalytics,
    drift_phi,
    drift_psi,
    estimate_change_point,
    harmonic_blend,
    scenario_analytics,
    theta_tilde,
    theta_tilde_blend,
)
from .decision import (
    Decision,
    TestSpec,
    critical_value,
    one_sided_tail,
    run_test,
    two_sided_tail,
)
from .errors import (
    CirError,
    DegeneratePathError,
    DomainError,
    MalformedRowError,
    MatrixDomainError,
    NegativeValueError,
    NonUniformGridError,
    PathCsvError,
    SingularWindowError,
)
from .estimator import ThetaHat, lse_at, lse_discrete, lse_full
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    read_path_csv,
    run_experiment,
    write_path_csv,
)
from .model import (
    CirParams,
    StationaryLaw,
    conditional_mean,
    conditional_second_moment,
    stationary_design,
    stationary_law,
    stationary_moment,
)
from .pathfun import (
    PathFunctionals,
    compute_functionals,
    estimate_sigma_sq,
    ito_integral,
)
from .sampler import (
    ChangePath,
    ChangeScenario,
    SamplePath,
    euler_step,
    sample_transition,
    simulate_change_path,
    simulate_path,
)
from .testprocess import (
    RawScore,
    TestTrajectory,
    cusum_trajectory,
    inv_sqrt_2x2,
    raw_score,
    test_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "CirParams",
    "StationaryLaw",
    "stationary_law",
    "stationary_moment",
    "conditional_mean",
    "conditional_second_moment",
    "stationary_design",
    "SamplePath",
    "ChangeScenario",
    "ChangePath",
    "sample_transition",
    "simulate_path",
    "simulate_change_path",
    "euler_step",
    "PathFunctionals",
    "compute_functionals",
    "estimate_sigma_sq",
    "ito_integral",
    "ThetaHat",
    "lse_at",
    "lse_full",
    "lse_discrete",
    "RawScore",
    "TestTrajectory",
    "raw_score",
    "test_trajectory",
    "cusum_trajectory",
    "inv_sqrt_2x2",
    "TestSpec",
    "Decision",
    "one_sided_tail",
    "two_sided_tail",
    "critical_value",
    "run_test",
    "ChangePointEstimate",
    "ScenarioAnalytics",
    "estimate_change_point",
    "theta_tilde",
    "theta_tilde_blend",
    "harmonic_blend",
    "drift_psi",
    "drift_phi",
    "scenario_analytics",
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "read_path_csv",
    "write_path_csv",
    "CirError",
    "DomainError",
    "DegeneratePathError",
    "SingularWindowError",
    "MatrixDomainError",
    "PathCsvError",
    "MalformedRowError",
    "NonUniformGridError",
    "NegativeValueError",
    "__version__",
]
