"""Unit and property tests for the shared vector/matrix primitives."""

import numpy as np
import pytest

from hdloc.core_math import (
    ScatterSpec,
    sample_sphere,
    scatter_sqrt,
    spatial_sign,
    sphere_moment_check,
    walsh_sum_sign,
)


class TestSpatialSign:
    def test_three_four_five(self):
        np.testing.assert_allclose(spatial_sign([3.0, 4.0]), [0.6, 0.8], rtol=0, atol=1e-15)

    def test_zero_vector_maps_to_zero(self):
        out = spatial_sign(np.zeros(3))
        assert out.shape == (3,)
        assert np.all(out == 0.0)

    def test_identity_on_unit_vectors(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            u = rng.standard_normal(7)
            u /= np.linalg.norm(u)
            np.testing.assert_allclose(spatial_sign(u), u, rtol=0, atol=1e-15)

    def test_norm_exactly_one_or_zero(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            x = rng.standard_normal(5) * rng.choice([1e-8, 1.0, 1e8])
            nrm = np.linalg.norm(spatial_sign(x))
            assert abs(nrm - 1.0) < 1e-12

    @pytest.mark.parametrize("scale", [1e-6, 0.5, 3.0, 1e7])
    def test_positive_scale_equivariance(self, scale):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(11)
        np.testing.assert_allclose(spatial_sign(scale * x), spatial_sign(x),
                                   rtol=0, atol=1e-15)

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(ValueError):
            spatial_sign([1.0, bad, 0.0])

    def test_walsh_sum_sign(self):
        out = walsh_sum_sign([1.0, 0.0], [0.0, 1.0])
        np.testing.assert_allclose(out, [1 / np.sqrt(2), 1 / np.sqrt(2)])
        assert np.all(walsh_sum_sign([1.0, 0.0], [-1.0, 0.0]) == 0.0)


class TestScatterSpec:
    def test_toeplitz_materialization(self):
        sigma = ScatterSpec.toeplitz(0.5, 4).materialize()
        expected = np.array([[1, 0.5, 0.25, 0.125],
                             [0.5, 1, 0.5, 0.25],
                             [0.25, 0.5, 1, 0.5],
                             [0.125, 0.25, 0.5, 1]])
        np.testing.assert_allclose(sigma, expected, rtol=0, atol=0)

    def test_rho_zero_is_identity(self):
        np.testing.assert_array_equal(ScatterSpec.toeplitz(0.0, 3).materialize(), np.eye(3))
        assert ScatterSpec.identity(5).is_identity

    def test_rho_out_of_range(self):
        with pytest.raises(ValueError):
            ScatterSpec.toeplitz(1.0, 3)

    def test_explicit_requires_symmetry(self):
        with pytest.raises(ValueError):
            ScatterSpec.explicit(np.array([[1.0, 0.5], [0.3, 1.0]]))

    def test_trace_squared_matches_direct(self):
        spec = ScatterSpec.toeplitz(0.5, 30)
        sigma = spec.materialize()
        assert abs(spec.trace_squared() - np.trace(sigma @ sigma)) < 1e-9


class TestScatterSqrt:
    def test_identity(self):
        np.testing.assert_array_equal(scatter_sqrt(ScatterSpec.identity(4)), np.eye(4))

    def test_toeplitz_half_p3_reconstructs(self):
        spec = ScatterSpec.toeplitz(0.5, 3)
        L = scatter_sqrt(spec)
        np.testing.assert_allclose(L @ L.T, spec.materialize(), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("p", [2, 7, 40])
    def test_random_pd_reconstruction(self, p):
        rng = np.random.default_rng(p)
        A = rng.standard_normal((p, p))
        sigma = A @ A.T + p * np.eye(p)
        spec = ScatterSpec.explicit(sigma)
        L = scatter_sqrt(spec)
        err = np.linalg.norm(L @ L.T - sigma) / np.linalg.norm(sigma)
        assert err <= 1e-10

    def test_non_pd_error_names_pivot(self):
        bad = np.array([[1.0, 0.0, 0.0],
                        [0.0, -1.0, 0.0],
                        [0.0, 0.0, 1.0]])
        with pytest.raises(ValueError, match="leading minor"):
            scatter_sqrt(ScatterSpec.explicit(bad))


class TestSphereMoments:
    def test_identity_matrix_is_exact(self):
        res = sphere_moment_check(np.eye(6), reps=1000, seed=0)
        assert abs(res.exact2 - 1.0) == 0.0
        assert abs(res.mc2 - 1.0) < 1e-12
        assert res.se2 < 1e-12

    def test_identity_bilinear_fourth_moment(self):
        p = 6
        res = sphere_moment_check(np.eye(p), reps=200000, seed=1)
        assert abs(res.exact4 - 3.0 / (p * (p + 2))) < 1e-15
        assert abs(res.mc4 - res.exact4) <= 5 * res.se4

    def test_rank_one_projector_p10(self):
        M = np.zeros((10, 10))
        M[0, 0] = 1.0
        res = sphere_moment_check(M, reps=100000, seed=2)
        assert abs(res.mc2 - res.exact2) < 5 * res.se2

    @pytest.mark.parametrize("p", [5, 20, 100])
    def test_random_symmetric_within_5_se(self, p):
        rng = np.random.default_rng(p + 10)
        M = rng.standard_normal((p, p))
        M = (M + M.T) / 2.0
        res = sphere_moment_check(M, reps=40000, seed=p)
        assert res.ok(n_se=5.0)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            sphere_moment_check(np.eye(5), reps=10, seed=0)
        with pytest.raises(ValueError):
            sphere_moment_check(np.eye(1), reps=2000, seed=0)
        with pytest.raises(ValueError):
            sphere_moment_check(np.arange(9.0).reshape(3, 3), reps=2000, seed=0)

    def test_sphere_sampler_unit_norm(self):
        u = sample_sphere(8, 100, np.random.default_rng(3))
        np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, rtol=0, atol=1e-12)
