"""The four one-sample location test statistics and their standardizations.

Statistics
----------
sr   signed-rank: mean of sign(X_i+X_j)' sign(X_k+X_l) over ordered
     quadruples of pairwise-distinct indices. A brute-force reference
     (`sr_statistic_naive`, O(n^4 p)) serves as the oracle for the fast
     accumulator form (`sr_statistic_fast`, O(n^2 p)).
ss   spatial sign: mean of sign(X_i)' sign(X_j) over distinct pairs.
cq   mean test: mean of X_i' X_j over distinct pairs.
tsr  classical signed rank with an estimated scatter matrix (raw statistic
     only; requires n > p, calibrated by simulated critical values).

All standardized tests are one-sided: reject for large positive z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from . import kernels
from .core_math import row_spatial_signs, validate_sample_matrix


def _perm4(n: int) -> float:
    return float(n * (n - 1) * (n - 2) * (n - 3))


def _perm3(n: int) -> float:
    return float(n * (n - 1) * (n - 2))


def _gram(X: np.ndarray, gram: np.ndarray | None) -> np.ndarray:
    return X @ X.T if gram is None else gram


def _pair_sum_signs(X: np.ndarray) -> np.ndarray:
    """(n, n, p) tensor of sign(x_a + x_b), diagonal zero, zero sums zero."""
    R = X[:, None, :] + X[None, :, :]
    norms = np.sqrt(np.einsum("abp,abp->ab", R, R))
    np.fill_diagonal(norms, 0.0)
    inv = np.zeros_like(norms)
    pos = norms > 0.0
    inv[pos] = 1.0 / norms[pos]
    return R * inv[:, :, None]


def _inv_diff_norms(X: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Symmetric matrix of 1/||x_a - x_b||, zero on ties and the diagonal."""
    d = np.diag(W).copy()
    d2 = d[:, None] + d[None, :] - 2.0 * W
    np.fill_diagonal(d2, 0.0)
    inv = np.zeros_like(d2)
    pos = d2 > 0.0
    inv[pos] = 1.0 / np.sqrt(d2[pos])
    return inv


def _distinct_quad_mask(n: int) -> np.ndarray:
    a = np.arange(n)
    ii, jj, kk, ll = np.meshgrid(a, a, a, a, indexing="ij", sparse=True)
    return ((ii != jj) & (ii != kk) & (ii != ll)
            & (jj != kk) & (jj != ll) & (kk != ll))


# ---------------------------------------------------------------------------
# Signed-rank statistic
# ---------------------------------------------------------------------------

def sr_statistic_naive(X) -> float:
    """Brute-force signed-rank statistic: the literal sum over all ordered
    quadruples of pairwise-distinct indices, divided by n!/(n-4)!.

    O(n^4 p); the oracle against which the fast path is proven equal.
    """
    X = validate_sample_matrix(X, min_rows=4, context="sr_statistic_naive")
    n = X.shape[0]
    R = _pair_sum_signs(X)
    G = np.einsum("abq,cdq->abcd", R, R)
    return float(G[_distinct_quad_mask(n)].sum() / _perm4(n))


def sr_statistic_fast(X) -> float:
    """Fast signed-rank statistic via pair-sign accumulators, O(n^2 p).

    Equal to sr_statistic_naive to 1e-10 absolute. With
    v_a = sum_{b != a} sign(x_a + x_b), m2 the number of ordered pairs with
    nonzero Walsh sum, W1 = ||sum_a v_a||^2 and S = sum_a ||v_a||^2 - m2,
    the quadruple sum equals W1 - 4 S - 2 m2.
    """
    X = validate_sample_matrix(X, min_rows=4, context="sr_statistic_fast")
    W1, Svv, m2 = kernels.sr_fast_core(X)
    S = Svv - m2
    return float((W1 - 4.0 * S - 2.0 * m2) / _perm4(X.shape[0]))


# ---------------------------------------------------------------------------
# tr(Sigma^2) estimators (spatial-sign based, location invariant)
# ---------------------------------------------------------------------------

def trace_sigma2_full(X, gram: np.ndarray | None = None) -> float:
    """Estimate tr(Sigma^2) from the full U-statistic over distinct ordered
    quadruples of difference signs:

        (2 p^2 / P4) * sum* sign(X_i-X_j)'sign(X_k-X_l)
                            * sign(X_k-X_j)'sign(X_i-X_l)

    O(n^4) after the O(n^2 p) Gram matrix; location invariant.
    """
    X = validate_sample_matrix(X, min_rows=4, context="trace_sigma2_full")
    n, p = X.shape
    W = _gram(X, gram)
    invr = _inv_diff_norms(X, W)
    s = kernels.cross_quad_full(W, invr)
    return float(2.0 * p * p * s / _perm4(n))


def trace_sigma2_reduced(X, i0: int | None = None, gram: np.ndarray | None = None) -> float:
    """tr(Sigma^2) estimate with the first index frozen at i0 (default n//2),
    summed over ordered distinct (j, k, l) avoiding i0 and normalized by
    2 p^2 / P3(n-1). O(n^3) after the Gram matrix."""
    X = validate_sample_matrix(X, min_rows=4, context="trace_sigma2_reduced")
    n, p = X.shape
    if i0 is None:
        i0 = n // 2
    if not 0 <= i0 < n:
        raise ValueError(f"trace_sigma2_reduced: invalid i0={i0} for n={n}")
    W = _gram(X, gram)
    invr = _inv_diff_norms(X, W)
    s = kernels.cross_quad_reduced(W, invr, i0)
    return float(2.0 * p * p * s / _perm3(n - 1))


def cq_trace_lambda2(X, mode: str = "reduced", i0: int | None = None,
                     gram: np.ndarray | None = None) -> float:
    """Location-invariant estimate of tr(Lambda^2) from raw differences:

        sum* (X_i-X_j)'(X_k-X_l) * (X_k-X_j)'(X_i-X_l) / (2 * count)

    The kernel has expectation 2 tr(Lambda^2) over distinct quadruples, so
    the sum is halved. mode "reduced" freezes i at i0 (default n//2).
    """
    X = validate_sample_matrix(X, min_rows=4, context="cq_trace_lambda2")
    n = X.shape[0]
    W = _gram(X, gram)
    ones = np.ones_like(W)
    if mode == "full":
        s = kernels.cross_quad_full(W, ones)
        return float(s / (2.0 * _perm4(n)))
    if mode != "reduced":
        raise ValueError(f"cq_trace_lambda2: unknown mode {mode!r}")
    if i0 is None:
        i0 = n // 2
    if not 0 <= i0 < n:
        raise ValueError(f"cq_trace_lambda2: invalid i0={i0} for n={n}")
    s = kernels.cross_quad_reduced(W, ones, i0)
    return float(s / (2.0 * _perm3(n - 1)))


# ---------------------------------------------------------------------------
# Test results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestResult:
    """Raw and standardized statistic with the one-sided normal decision."""

    test: str
    raw: float
    sigma_hat: float
    z: float
    p_value: float
    reject: bool
    alpha: float
    trace_hat: float | None = None
    diagnostics: dict = field(default_factory=dict)


def _standardize(test: str, raw: float, sigma_hat: float, alpha: float,
                 trace_hat: float | None, diagnostics: dict) -> TestResult:
    z = raw / sigma_hat
    p_value = float(norm.sf(z))
    reject = bool(z > norm.isf(alpha))
    return TestResult(test=test, raw=float(raw), sigma_hat=float(sigma_hat),
                      z=float(z), p_value=p_value, reject=reject, alpha=alpha,
                      trace_hat=trace_hat, diagnostics=diagnostics)


def sr_test(X, alpha: float = 0.05, trace_mode: str = "reduced",
            gram: np.ndarray | None = None) -> TestResult:
    """Signed-rank test standardized by sigma^2 = 8 tr(Sigma^2) / (n^2 p^2)."""
    X = validate_sample_matrix(X, min_rows=4, context="sr_test")
    n, p = X.shape
    raw = sr_statistic_fast(X)
    if trace_mode == "full":
        trace_hat = trace_sigma2_full(X, gram=gram)
    elif trace_mode == "reduced":
        trace_hat = trace_sigma2_reduced(X, gram=gram)
    else:
        raise ValueError(f"sr_test: unknown trace_mode {trace_mode!r}")
    if trace_hat <= 0.0:
        raise ValueError("sr_test: degenerate trace estimate")
    sigma_hat = math.sqrt(8.0 * trace_hat / (n * n * p * p))
    diag = {"n": n, "p": p, "trace_mode": trace_mode}
    return _standardize("sr", raw, sigma_hat, alpha, trace_hat, diag)


def _sign_gram(X: np.ndarray, gram: np.ndarray | None):
    """Gram matrix of row signs (W_ij / sqrt(W_ii W_jj)), plus zero-row count."""
    W = _gram(X, gram)
    d = np.diag(W)
    inv = np.zeros_like(d)
    pos = d > 0.0
    inv[pos] = 1.0 / np.sqrt(d[pos])
    return W * inv[:, None] * inv[None, :], int((~pos).sum())


def ss_statistic(X, gram: np.ndarray | None = None) -> float:
    """Spatial-sign statistic: mean of sign(X_i)' sign(X_j) over i != j."""
    X = validate_sample_matrix(X, min_rows=2, context="ss_statistic")
    n = X.shape[0]
    B, _ = _sign_gram(X, gram)
    return float((B.sum() - np.trace(B)) / (n * (n - 1)))


def ss_test(X, alpha: float = 0.05, gram: np.ndarray | None = None) -> TestResult:
    """Spatial-sign test; the null variance 2 tr(B^2) / (n(n-1)) is estimated
    by the pair average of (sign(X_i)' sign(X_j))^2."""
    X = validate_sample_matrix(X, min_rows=2, context="ss_test")
    n = X.shape[0]
    B, n_zero = _sign_gram(X, gram)
    raw = float((B.sum() - np.trace(B)) / (n * (n - 1)))
    B2 = B * B
    tr_b2_hat = float((B2.sum() - np.trace(B2)) / (n * (n - 1)))
    if tr_b2_hat <= 0.0:
        raise ValueError("ss_test: degenerate variance estimate")
    sigma_hat = math.sqrt(2.0 * tr_b2_hat / (n * (n - 1)))
    diag = {"n": n, "p": X.shape[1], "zero_rows": n_zero}
    return _standardize("ss", raw, sigma_hat, alpha, tr_b2_hat, diag)


def cq_statistic(X, gram: np.ndarray | None = None) -> float:
    """Mean-test statistic: mean of X_i' X_j over i != j."""
    X = validate_sample_matrix(X, min_rows=2, context="cq_statistic")
    n = X.shape[0]
    W = _gram(X, gram)
    return float((W.sum() - np.trace(W)) / (n * (n - 1)))


def cq_trace_pairs(X, gram: np.ndarray | None = None) -> float:
    """Leave-two-out estimate of tr(Lambda^2) (the cited mean-test's own
    construction): average over ordered pairs j != k of

        X_j'(X_k - mean_{(j,k)}) * X_k'(X_j - mean_{(j,k)})

    where mean_{(j,k)} excludes both rows. Unbiased under the null; under a
    mean shift theta it picks up theta' Lambda theta / (n - 2), negligible
    for local alternatives. O(n^2) from the Gram matrix."""
    X = validate_sample_matrix(X, min_rows=4, context="cq_trace_pairs")
    n = X.shape[0]
    W = _gram(X, gram)
    rowsum = W.sum(axis=1)
    # A[j, k] = X_j'(X_k - mean_{(j,k)})
    A = W - (rowsum[:, None] - np.diag(W)[:, None] - W) / (n - 2.0)
    prod = A * A.T
    np.fill_diagonal(prod, 0.0)
    return float(prod.sum() / (n * (n - 1.0)))


def cq_test(X, alpha: float = 0.05, gram: np.ndarray | None = None) -> TestResult:
    """Mean test standardized by sigma^2 = 2 tr(Lambda^2) / (n(n-1)) with the
    leave-two-out estimate of tr(Lambda^2)."""
    X = validate_sample_matrix(X, min_rows=4, context="cq_test")
    n = X.shape[0]
    W = _gram(X, gram)
    raw = float((W.sum() - np.trace(W)) / (n * (n - 1)))
    tr_l2_hat = cq_trace_pairs(X, gram=W)
    if tr_l2_hat <= 0.0:
        raise ValueError("cq_test: degenerate variance estimate")
    sigma_hat = math.sqrt(2.0 * tr_l2_hat / (n * (n - 1)))
    diag = {"n": n, "p": X.shape[1]}
    return _standardize("cq", raw, sigma_hat, alpha, tr_l2_hat, diag)


# ---------------------------------------------------------------------------
# Classical signed rank (estimated scatter; n > p)
# ---------------------------------------------------------------------------

def tsr_statistic(X) -> float:
    """Classical signed-rank statistic with an estimated scatter matrix:

        || n^-2 sum_{i,j} sign(S^-1/2 (X_i + X_j)) ||^2

    over ALL ordered pairs including i = j, with S the sample covariance.
    Raw quantity only: every positive scaling cancels under simulated
    critical values, and the statistic is affine invariant.
    """
    X = validate_sample_matrix(X, min_rows=2, context="tsr_statistic")
    n, p = X.shape
    if n <= p:
        raise ValueError(f"tsr_statistic: requires n > p, got n={n}, p={p}")
    S = np.cov(X, rowvar=False)
    S = np.atleast_2d(S)
    vals, vecs = np.linalg.eigh(S)
    if vals[0] <= 1e-12 * max(vals[-1], 1.0):
        raise ValueError("tsr_statistic: singular sample covariance")
    inv_half = (vecs / np.sqrt(vals)) @ vecs.T
    Y = X @ inv_half
    R = _pair_sum_signs(Y)           # diagonal is zero: add sign(Y_i) for i = j
    total = R.sum(axis=(0, 1))
    U, _ = row_spatial_signs(Y)
    total += U.sum(axis=0)
    total /= n * n
    return float(total @ total)
