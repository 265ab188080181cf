"""High-dimensional one-sample location tests and their Monte Carlo harness."""

from .core_math import (
    ScatterSpec,
    scatter_sqrt,
    spatial_sign,
    sphere_moment_check,
    walsh_sum_sign,
)
from .samplers import (
    MeanSpec,
    ScenarioSpec,
    covariance_factor,
    sample,
    theta_vector,
)
from .stats import (
    TestResult,
    cq_statistic,
    cq_test,
    sr_statistic_fast,
    sr_statistic_naive,
    sr_test,
    ss_statistic,
    ss_test,
    trace_sigma2_full,
    trace_sigma2_reduced,
    tsr_statistic,
)

__version__ = "0.1.0"

__all__ = [
    "ScatterSpec", "scatter_sqrt", "spatial_sign", "sphere_moment_check",
    "walsh_sum_sign", "MeanSpec", "ScenarioSpec", "covariance_factor",
    "sample", "theta_vector", "TestResult", "cq_statistic", "cq_test",
    "sr_statistic_fast", "sr_statistic_naive", "sr_test", "ss_statistic",
    "ss_test", "trace_sigma2_full", "trace_sigma2_reduced", "tsr_statistic",
    "__version__",
]
