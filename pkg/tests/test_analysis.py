"""Tests for moment estimation, power formulas, and efficiency ratios."""

import math

import pytest
from scipy.stats import norm

from hdloc.analysis import (
    ARE_DISTRIBUTIONS,
    are_from_moments,
    are_table,
    asymptotic_power_cq,
    asymptotic_power_sr,
    estimate_moments,
    tau_f_check,
    _are_spec,
)
from hdloc.core_math import ScatterSpec
from hdloc.samplers import ScenarioSpec


class TestEstimateMoments:
    def test_normal_norm_second_moment(self):
        est = estimate_moments(_are_spec("normal", 2000), 2000, 2000, seed=0)
        assert abs(est.m2 / 2000 - 1.0) < 0.01

    def test_normal_norm_concentration(self):
        est = estimate_moments(_are_spec("normal", 2000), 2000, 2000, seed=1)
        assert abs(est.minv * math.sqrt(est.m2) - 1.0) < 0.01

    def test_mvt4_second_moment_scaling(self):
        est = estimate_moments(_are_spec("t4", 2000), 2000, 4000, seed=2)
        assert abs(est.m2 / 2000 - 2.0) < 0.06

    def test_cauchy_schwarz_lower_bound(self):
        for label in ("t5", "mn_0.2_3", "normal"):
            est = estimate_moments(_are_spec(label, 500), 500, 3000, seed=3)
            bound = est.minv * math.sqrt(est.m2)
            assert bound >= 1.0 - 3.0 * est.se_minv * math.sqrt(est.m2)

    def test_determinism(self):
        a = estimate_moments(_are_spec("t5", 300), 300, 1500, seed=9)
        b = estimate_moments(_are_spec("t5", 300), 300, 1500, seed=9)
        assert (a.m2, a.minv, a.mpairinv, a.c0) == (b.m2, b.minv, b.mpairinv, b.c0)

    def test_c0_uses_scatter(self):
        ident = estimate_moments(ScenarioSpec.normal(ScatterSpec.identity(200)),
                                 200, 1500, seed=4)
        toep = estimate_moments(ScenarioSpec.normal(ScatterSpec.toeplitz(0.5, 200)),
                                200, 1500, seed=4)
        # same epsilon moments, different pair-sum norms
        assert ident.m2 == toep.m2
        assert ident.c0 != toep.c0

    def test_preconditions(self):
        with pytest.raises(ValueError, match="reps"):
            estimate_moments(_are_spec("normal", 50), 50, 100, seed=0)
        with pytest.raises(ValueError, match="elliptical"):
            estimate_moments(ScenarioSpec.factor_t(4, ScatterSpec.identity(5)),
                             5, 2000, seed=0)


class TestAsymptoticPower:
    def test_zero_signal_gives_alpha(self):
        for alpha in (0.01, 0.05, 0.2):
            assert asymptotic_power_sr(0.0, 100.0, 0.05, 30, 200, alpha) == pytest.approx(alpha)
            assert asymptotic_power_cq(0.0, 100.0, 200.0, 30, 200, alpha) == pytest.approx(alpha)

    def test_drift_at_critical_value_gives_half(self):
        # choose theta'theta so the drift equals z_alpha
        alpha, n, p, tr2, c0 = 0.05, 30, 100, 150.0, 0.05
        z_a = norm.isf(alpha)
        theta2 = z_a * math.sqrt(2 * tr2) / (2 * c0 * c0 * p * n)
        assert asymptotic_power_sr(theta2, tr2, c0, n, p, alpha) == pytest.approx(0.5)

    def test_strictly_increasing_in_signal(self):
        vals = [asymptotic_power_sr(t2, 80.0, 0.07, 40, 100, 0.05)
                for t2 in (0.0, 0.3, 0.8, 2.0)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_drift_ratio_equals_are(self):
        # beta_SR and beta_CQ drifts differ exactly by 2 c0^2 m2
        n, p, tr2, alpha = 40, 400, 600.0, 0.05
        c0, m2 = 0.04, 780.0
        theta2 = 0.9
        z_a = norm.isf(alpha)
        d_sr = norm.ppf(asymptotic_power_sr(theta2, tr2, c0, n, p, alpha)) + z_a
        d_cq = norm.ppf(asymptotic_power_cq(theta2, tr2, m2, n, p, alpha)) + z_a
        assert d_sr / d_cq == pytest.approx(2 * c0 * c0 * m2, rel=1e-9)

    def test_gaussian_limit_matches_cq(self):
        # estimated moments at p=2000: the two drifts agree within 2%
        est = estimate_moments(_are_spec("normal", 2000), 2000, 2000, seed=5)
        n, p, tr2, theta2, alpha = 40, 2000, 4000.0, 1.0, 0.05
        z_a = norm.isf(alpha)
        d_sr = norm.ppf(asymptotic_power_sr(theta2, tr2, est.mpairinv, n, p, alpha)) + z_a
        d_cq = norm.ppf(asymptotic_power_cq(theta2, tr2, est.m2, n, p, alpha)) + z_a
        assert d_sr / d_cq == pytest.approx(1.0, abs=0.02)

    def test_alpha_validated(self):
        with pytest.raises(ValueError):
            asymptotic_power_sr(1.0, 1.0, 1.0, 10, 10, 0.0)


@pytest.fixture(scope="module")
def fast_rows():
    # reduced-cost configuration for CI; the acceptance suite runs the
    # full p=2000 x 10000 protocol
    return are_table(("t5", "normal", "mn_0.2_3"), p=200, reps=2000, seed=11)


class TestAreTable:

    def test_normal_is_unity(self, fast_rows):
        row = next(r for r in fast_rows if r.label == "normal")
        for v in (row.ss_cq, row.sr_cq, row.sr_ss):
            assert v == pytest.approx(1.0, abs=0.02 + 0.03)  # widened at p=200

    def test_product_identity_exact(self, fast_rows):
        for r in fast_rows:
            assert r.sr_ss * r.ss_cq == pytest.approx(r.sr_cq, rel=1e-12)

    def test_efficiency_bounds(self, fast_rows):
        for r in fast_rows:
            assert r.ss_cq >= 1.0 - 3.0 * r.se_ss_cq
            assert r.sr_cq >= 1.0 - 3.0 * r.se_sr_cq
            assert r.sr_ss <= 1.0 + 3.0 * r.se_sr_ss

    def test_deterministic_per_seed(self):
        a = are_table(("t6",), p=100, reps=2000, seed=21)
        b = are_table(("t6",), p=100, reps=2000, seed=21)
        assert a[0].ss_cq == b[0].ss_cq

    def test_distribution_labels(self):
        assert len(ARE_DISTRIBUTIONS) == 8
        assert are_from_moments(2.0, 1.0, 0.8)["sr_cq"] == pytest.approx(2 * 0.64 * 2.0)


class TestTauF:
    def test_p1_uniform_pit_value(self):
        spec = ScenarioSpec.normal(ScatterSpec.identity(2))
        out = tau_f_check(spec, [1], outer=400, inner=400, seed=0)[0]
        assert out["tau_f"] == pytest.approx(1.0 / 3.0, abs=5 * out["se"] + 0.01)

    def test_trend_toward_half(self):
        spec = ScenarioSpec.normal(ScatterSpec.identity(2))
        out = tau_f_check(spec, [10, 100, 400], outer=150, inner=200, seed=1)
        taus = [d["tau_f"] for d in out]
        assert abs(taus[-1] - 0.5) < abs(taus[0] - 0.5)
        assert 0.45 <= taus[-1] <= 0.55

    def test_inner_loop_minimum(self):
        spec = ScenarioSpec.normal(ScatterSpec.identity(2))
        with pytest.raises(ValueError, match="inner"):
            tau_f_check(spec, [10], outer=50, inner=50, seed=0)
