"""Fast self-check suite behind `hdloc check`.

Small-scale versions of the package's own correctness gates: fast-path
oracle equality, trace-estimator enumeration fixtures, the sphere-moment
identities, the projected-sign limit, and null size calibration. Everything
is seeded, so repeated runs give identical pass/fail outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import stats
from .analysis import tau_f_check
from .core_math import ScatterSpec, sphere_moment_check
from .samplers import MeanSpec, ScenarioSpec, sample
from .simharness import ExperimentConfig, run_experiment


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check_oracle(master_seed: int) -> CheckResult:
    rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(1,)))
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(4, 11))
        p = int(rng.integers(1, 9))
        X = rng.standard_normal((n, p))
        worst = max(worst, abs(stats.sr_statistic_fast(X) - stats.sr_statistic_naive(X)))
    return CheckResult("oracle equality (fast vs naive, 60 fixtures)",
                       worst < 1e-10, f"max |diff| = {worst:.2e}, bound 1e-10")


def _check_trace_fixture(master_seed: int) -> CheckResult:
    import itertools

    from .core_math import spatial_sign

    rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(2,)))
    X = rng.standard_normal((5, 3))
    n, p = X.shape
    tot = 0.0
    for i, j, k, l in itertools.permutations(range(n), 4):
        tot += (spatial_sign(X[i] - X[j]) @ spatial_sign(X[k] - X[l])) * \
               (spatial_sign(X[k] - X[j]) @ spatial_sign(X[i] - X[l]))
    full_enum = 2.0 * p * p * tot / (n * (n - 1) * (n - 2) * (n - 3))
    diff = abs(full_enum - stats.trace_sigma2_full(X))
    return CheckResult("trace estimator vs enumeration (n=5)",
                       diff < 1e-10, f"|diff| = {diff:.2e}, bound 1e-10")


def _check_sphere(master_seed: int) -> CheckResult:
    rng = np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(3,)))
    M = rng.standard_normal((10, 10))
    M = (M + M.T) / 2.0
    res = sphere_moment_check(M, reps=20000, seed=int(rng.integers(2 ** 31)))
    d2 = abs(res.mc2 - res.exact2) / max(res.se2, 1e-300)
    d4 = abs(res.mc4 - res.exact4) / max(res.se4, 1e-300)
    return CheckResult("sphere moment identities (p=10)",
                       res.ok(), f"|mc2-exact2| = {d2:.1f} se, |mc4-exact4| = {d4:.1f} se, bound 5")


def _check_tau_f(master_seed: int) -> CheckResult:
    spec = ScenarioSpec.normal(ScatterSpec.identity(2))
    out = tau_f_check(spec, [200], outer=120, inner=250, seed=master_seed)[0]
    ok = 0.45 <= out["tau_f"] <= 0.55
    return CheckResult("projected-sign second moment (p=200)",
                       ok, f"tau_f = {out['tau_f']:.3f}, bound [0.45, 0.55]")


def _check_null_sizes(master_seed: int) -> CheckResult:
    spec = ScenarioSpec.from_label("I", ScatterSpec.toeplitz(0.5, 50))
    cfg = ExperimentConfig(scenario=spec, n=30, p=50, allocation="null", signal=0.0,
                           tests=("cq", "ss", "sr"), reps=400, master_seed=master_seed)
    table = run_experiment(cfg)
    rates = {r.test: 100.0 * r.rejection_rate for r in table.rows}
    ok = all(2.0 <= v <= 9.0 for v in rates.values())
    detail = ", ".join(f"{k} = {v:.1f}%" for k, v in rates.items())
    return CheckResult("null size calibration (scenario I, 400 reps)",
                       ok, detail + ", bound [2%, 9%]")


def _check_determinism(master_seed: int) -> CheckResult:
    spec = ScenarioSpec.from_label("II", ScatterSpec.toeplitz(0.5, 30))
    cfg = ExperimentConfig(scenario=spec, n=20, p=30, allocation="dense", signal=0.1,
                           tests=("cq", "ss", "sr"), reps=150, master_seed=master_seed)
    a = run_experiment(cfg, threads=1)
    b = run_experiment(cfg, threads=2)
    same = [ra.rejections for ra in a.rows] == [rb.rejections for rb in b.rows]
    return CheckResult("worker-count determinism (1 vs 2 workers)",
                       same, "identical rejection counts" if same else "counts differ")


def _check_mean_calibration(master_seed: int) -> CheckResult:
    spec = ScenarioSpec.from_label("III", ScatterSpec.toeplitz(0.5, 100))
    from .samplers import covariance_factor, theta_vector
    mean = MeanSpec("dense", 0.05, 100)
    theta = theta_vector(mean, spec)
    target = 0.05 * math.sqrt(covariance_factor(spec) ** 2 * spec.scatter.trace_squared())
    rel = abs(float(theta @ theta) - target) / target
    return CheckResult("mean-vector signal calibration",
                       rel < 1e-12, f"relative error = {rel:.2e}, bound 1e-12")


def run_self_checks(master_seed: int = 0) -> list[CheckResult]:
    checks = (_check_oracle, _check_trace_fixture, _check_sphere, _check_tau_f,
              _check_mean_calibration, _check_null_sizes, _check_determinism)
    return [fn(master_seed) for fn in checks]
