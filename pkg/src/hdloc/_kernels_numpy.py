"""Pure-numpy implementations of the hot kernels.

These are the fallback path (see hdloc.kernels); the numba module mirrors the
same functions with explicit loops. Both paths are exact reformulations of
the distinct-index sums, never approximations. W and invr are symmetric
matrices throughout (Gram matrix of the rows, and inverse pair norms).
"""

from __future__ import annotations

import numpy as np


def sr_fast_core(X: np.ndarray) -> tuple[float, float, float]:
    """Accumulators for the fast signed-rank statistic.

    With R_ab = sign(x_a + x_b) for a != b and v_a = sum_{b != a} R_ab:

    Returns
    -------
    W1 : ||sum_a v_a||^2
    Svv : sum_a ||v_a||^2
    m2 : number of ordered pairs (a, b), a != b, with x_a + x_b != 0
    """
    S = X @ X.T
    d = np.diag(S).copy()
    s2 = d[:, None] + 2.0 * S + d[None, :]
    np.fill_diagonal(s2, 0.0)
    inv = np.zeros_like(s2)
    pos = s2 > 0.0
    inv[pos] = 1.0 / np.sqrt(s2[pos])
    # v_a = x_a * sum_b inv_ab + sum_b inv_ab x_b, with inv diag zero
    rowsum = inv.sum(axis=1)
    V = X * rowsum[:, None] + inv @ X
    g = V.sum(axis=0)
    W1 = float(g @ g)
    Svv = float(np.einsum("ij,ij->", V, V))
    m2 = float(pos.sum())
    return W1, Svv, m2


def cross_quad_reduced(W: np.ndarray, invr: np.ndarray, i0: int) -> float:
    """Sum over ordered distinct (j, k, l), none equal to i0, of

        (x_i0 - x_j)'(x_k - x_l) * (x_k - x_j)'(x_i0 - x_l)
        * invr[i0,j] * invr[k,l] * invr[k,j] * invr[i0,l]

    expressed through the Gram matrix W = X X'. Pass invr = 1/||x_a - x_b||
    (zero where the difference vanishes) for the spatial-sign version, or
    all ones for the raw-difference version.
    """
    n = W.shape[0]
    if not 0 <= i0 < n:
        raise ValueError(f"invalid i0={i0} for n={n}")
    idx = np.delete(np.arange(n), i0)
    m = n - 1
    w0 = W[i0, idx]            # (m,)  W[i0, .]
    G = W[np.ix_(idx, idx)]    # (m, m)
    r0 = invr[i0, idx]         # (m,)
    R = invr[np.ix_(idx, idx)]  # (m, m)

    # f1[j,k,l] = (W[i0,k] - W[i0,l] - W[j,k] + W[j,l]) * invr[i0,j] * invr[k,l]
    t1 = (w0[None, :, None] - w0[None, None, :]
          - G[:, :, None] + G[:, None, :])
    f1 = t1 * r0[:, None, None] * R[None, :, :]
    # f2[j,k,l] = (W[k,i0] - W[k,l] - W[j,i0] + W[j,l]) * invr[k,j] * invr[i0,l]
    t2 = (w0[None, :, None] - G[None, :, :]
          - w0[:, None, None] + G[:, None, :])
    f2 = t2 * R[:, :, None] * r0[None, None, :]

    prod = f1 * f2
    eye = np.eye(m, dtype=bool)
    prod[eye[:, :, None] | eye[:, None, :] | eye[None, :, :]] = 0.0
    return float(prod.sum())


def cross_quad_full(W: np.ndarray, invr: np.ndarray) -> float:
    """Sum over ordered pairwise-distinct (i, j, k, l) of the cross-product
    kernel (same weighting convention as cross_quad_reduced)."""
    n = W.shape[0]
    eye = np.eye(n, dtype=bool)
    mask3 = eye[:, :, None] | eye[:, None, :] | eye[None, :, :]
    total = 0.0
    for i in range(n):
        w0 = W[i]
        r0 = invr[i]
        t1 = (w0[None, :, None] - w0[None, None, :]
              - W[:, :, None] + W[:, None, :])
        f1 = t1 * r0[:, None, None] * invr[None, :, :]
        t2 = (w0[None, :, None] - W[None, :, :]
              - w0[:, None, None] + W[:, None, :])
        f2 = t2 * invr[:, :, None] * r0[None, None, :]
        prod = f1 * f2
        prod[mask3] = 0.0
        prod[i, :, :] = 0.0
        prod[:, i, :] = 0.0
        prod[:, :, i] = 0.0
        total += float(prod.sum())
    return total
