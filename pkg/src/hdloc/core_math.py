"""Deterministic vector/matrix primitives shared by the tests and samplers.

Conventions
-----------
- Sample matrices are (n, p) float arrays: rows = observations.
- ``spatial_sign`` maps a vector to the unit sphere and the origin to the
  zero vector, so a sign always has norm exactly 1 or exactly 0.
- Scatter matrices are symmetric positive definite; ``scatter_sqrt`` returns
  the lower-triangular Cholesky factor L with L @ L.T equal to the scatter.
  Any square root yields the same sampling distribution for elliptical draws,
  so the cheap triangular factor is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


def spatial_sign(x: np.ndarray) -> np.ndarray:
    """Unit-normalize a vector, mapping the zero vector to itself.

    Parameters
    ----------
    x : (p,) array_like
        Input vector. All entries must be finite.

    Returns
    -------
    (p,) ndarray
        x / ||x|| when ||x|| > 0, otherwise the zero vector.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("spatial_sign: input has non-finite entries")
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        return np.zeros_like(x)
    return x / nrm


def walsh_sum_sign(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Spatial sign of the pairwise (Walsh) sum x + y."""
    return spatial_sign(np.asarray(x, dtype=np.float64) + np.asarray(y, dtype=np.float64))


def row_spatial_signs(X: np.ndarray) -> tuple[np.ndarray, int]:
    """Spatial sign of every row of X.

    Returns
    -------
    U : (n, p) ndarray
        Row-wise signs; zero rows map to zero rows.
    n_zero : int
        Number of rows that were exactly zero.
    """
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1)
    zero = norms == 0.0
    safe = np.where(zero, 1.0, norms)
    return X / safe[:, None], int(zero.sum())


def validate_sample_matrix(X, min_rows: int = 1, context: str = "sample") -> np.ndarray:
    """Coerce X to a float64 (n, p) matrix and check basic invariants."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"{context}: expected a 2-D (n, p) matrix, got ndim={X.ndim}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{context}: matrix has non-finite entries")
    if X.shape[0] < min_rows:
        if min_rows == 4:
            raise ValueError("distinct quadruples unavailable: need n >= 4, got n=%d" % X.shape[0])
        raise ValueError(f"{context}: need at least {min_rows} rows, got {X.shape[0]}")
    return X


# ---------------------------------------------------------------------------
# Scatter matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScatterSpec:
    """Parameterized scatter matrix.

    kind is either "toeplitz" (entries rho**|i-j|, PD for |rho| < 1) or
    "explicit" (a user-supplied symmetric positive definite matrix).
    """

    kind: str
    p: int
    rho: float | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("ScatterSpec: p must be >= 1")
        if self.kind == "toeplitz":
            if self.rho is None or not -1.0 < self.rho < 1.0:
                raise ValueError("ScatterSpec: toeplitz rho must lie in (-1, 1)")
        elif self.kind == "explicit":
            m = self.matrix
            if m is None or m.ndim != 2 or m.shape != (self.p, self.p):
                raise ValueError("ScatterSpec: explicit matrix must be (p, p)")
            if not np.allclose(m, m.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(m).max())):
                raise ValueError("ScatterSpec: explicit matrix must be symmetric")
        else:
            raise ValueError(f"ScatterSpec: unknown kind {self.kind!r}")

    @classmethod
    def toeplitz(cls, rho: float, p: int) -> "ScatterSpec":
        return cls(kind="toeplitz", p=p, rho=float(rho))

    @classmethod
    def explicit(cls, matrix) -> "ScatterSpec":
        m = np.asarray(matrix, dtype=np.float64)
        return cls(kind="explicit", p=m.shape[0], matrix=m)

    @classmethod
    def identity(cls, p: int) -> "ScatterSpec":
        return cls.toeplitz(0.0, p)

    @property
    def is_identity(self) -> bool:
        if self.kind == "toeplitz":
            return self.rho == 0.0
        return bool(np.array_equal(self.matrix, np.eye(self.p)))

    def materialize(self) -> np.ndarray:
        """Return the scatter matrix as a dense (p, p) array."""
        if self.kind == "toeplitz":
            idx = np.arange(self.p)
            if self.rho == 0.0:
                return np.eye(self.p)
            return self.rho ** np.abs(idx[:, None] - idx[None, :])
        return self.matrix.copy()

    def trace_squared(self) -> float:
        """tr(Sigma^2), computed directly from the materialized matrix."""
        sigma = self.materialize()
        return float(np.sum(sigma * sigma))


_SQRT_CACHE: dict[tuple, np.ndarray] = {}


def scatter_sqrt(spec: ScatterSpec) -> np.ndarray:
    """Lower-triangular factor L with L @ L.T equal to the scatter matrix.

    Raises
    ------
    ValueError
        If the matrix is not positive definite; the message names the
        failing leading minor (pivot).
    """
    key = None
    if spec.kind == "toeplitz":
        key = ("toeplitz", spec.rho, spec.p)
        cached = _SQRT_CACHE.get(key)
        if cached is not None:
            return cached
    sigma = spec.materialize()
    try:
        L = scipy.linalg.cholesky(sigma, lower=True)
    except scipy.linalg.LinAlgError as exc:
        # scipy reports "k-th leading minor ... is not positive definite"
        raise ValueError(f"scatter_sqrt: factorization failed: {exc}") from exc
    if key is not None:
        _SQRT_CACHE[key] = L
    return L


# ---------------------------------------------------------------------------
# Sphere-moment identities (numerical self-checks)
# ---------------------------------------------------------------------------

def sample_sphere(p: int, reps: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `reps` points uniform on the unit p-sphere (normalized Gaussians)."""
    g = rng.standard_normal((reps, p))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@dataclass(frozen=True)
class SphereMomentCheck:
    mc2: float
    exact2: float
    se2: float
    mc4: float
    exact4: float
    se4: float
    p: int
    reps: int

    def ok(self, n_se: float = 5.0) -> bool:
        # se of 0 means the estimate is exact up to float rounding
        tol2 = max(n_se * self.se2, 1e-12)
        tol4 = max(n_se * self.se4, 1e-12)
        return abs(self.mc2 - self.exact2) <= tol2 and abs(self.mc4 - self.exact4) <= tol4


def sphere_moment_check(M: np.ndarray, reps: int, seed: int) -> SphereMomentCheck:
    """Monte Carlo check of two closed-form sphere-moment identities.

    With u, u1, u2 independent uniform draws on the unit p-sphere and M a
    symmetric p x p matrix:

        E (u' M u)^2   = (tr(M)^2 + 2 tr(M^2)) / (p^2 + 2p)
        E (u1' M u2)^4 = (3 tr(M^2)^2 + 6 tr(M^4)) / (p^2 (p+2)^2)

    The quadratic-form identity is checked with a single draw per replication
    (mc2), the bilinear-form identity with an independent pair (mc4).
    """
    M = np.asarray(M, dtype=np.float64)
    p = M.shape[0]
    if M.ndim != 2 or M.shape[1] != p:
        raise ValueError("sphere_moment_check: M must be square")
    if not np.allclose(M, M.T):
        raise ValueError("sphere_moment_check: M must be symmetric")
    if p < 2:
        raise ValueError("sphere_moment_check: p must be >= 2")
    if reps < 1000:
        raise ValueError("sphere_moment_check: reps must be >= 1000")

    t1 = float(np.trace(M))
    M2 = M @ M
    t2 = float(np.trace(M2))
    t4 = float(np.sum(M2 * M2))  # tr(M^4) = ||M^2||_F^2 for symmetric M

    exact2 = (t1 * t1 + 2.0 * t2) / (p * p + 2.0 * p)
    exact4 = (3.0 * t2 * t2 + 6.0 * t4) / (p * p * (p + 2.0) ** 2)

    rng = np.random.default_rng(seed)
    u = sample_sphere(p, reps, rng)
    q = np.einsum("ij,ij->i", u @ M, u)  # u' M u per draw
    q2 = q * q
    mc2 = float(q2.mean())
    se2 = float(q2.std(ddof=1) / np.sqrt(reps))

    u1 = sample_sphere(p, reps, rng)
    u2 = sample_sphere(p, reps, rng)
    b = np.einsum("ij,ij->i", u1 @ M, u2)
    b4 = b ** 4
    mc4 = float(b4.mean())
    se4 = float(b4.std(ddof=1) / np.sqrt(reps))

    return SphereMomentCheck(mc2=mc2, exact2=exact2, se2=se2,
                             mc4=mc4, exact4=exact4, se4=se4, p=p, reps=reps)
