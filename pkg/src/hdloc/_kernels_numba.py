"""Numba-jitted implementations of the hot kernels.

Mirrors hdloc._kernels_numpy function for function; compiled lazily on first
call and cached on disk. Summation order is fixed, so results are
reproducible run to run on one backend.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def sr_fast_core(X):
    n, p = X.shape
    V = np.zeros((n, p))
    w = np.empty(p)
    m2 = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            s = 0.0
            for t in range(p):
                w[t] = X[a, t] + X[b, t]
                s += w[t] * w[t]
            if s > 0.0:
                inv = 1.0 / math.sqrt(s)
                for t in range(p):
                    V[a, t] += w[t] * inv
                    V[b, t] += w[t] * inv
                m2 += 2.0
    W1 = 0.0
    Svv = 0.0
    for t in range(p):
        g = 0.0
        for a in range(n):
            g += V[a, t]
            Svv += V[a, t] * V[a, t]
        W1 += g * g
    return W1, Svv, m2


@njit(cache=True)
def cross_quad_reduced(W, invr, i0):
    n = W.shape[0]
    acc = 0.0
    for j in range(n):
        if j == i0:
            continue
        rij = invr[i0, j]
        if rij == 0.0:
            continue
        wij = W[i0, j]
        for k in range(n):
            if k == i0 or k == j:
                continue
            wik = W[i0, k]
            wjk = W[j, k]
            rkj = invr[k, j]
            base2 = wik - wij  # W[k,i0] - W[j,i0] by symmetry of W
            for l in range(n):
                if l == i0 or l == j or l == k:
                    continue
                f1 = (wik - W[i0, l] - wjk + W[j, l]) * rij * invr[k, l]
                f2 = (base2 - W[k, l] + W[j, l]) * rkj * invr[i0, l]
                acc += f1 * f2
    return acc


@njit(cache=True)
def cross_quad_full(W, invr):
    n = W.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            rij = invr[i, j]
            if rij == 0.0:
                continue
            wij = W[i, j]
            for k in range(n):
                if k == i or k == j:
                    continue
                wik = W[i, k]
                wjk = W[j, k]
                rkj = invr[k, j]
                base2 = wik - wij
                for l in range(n):
                    if l == i or l == j or l == k:
                        continue
                    f1 = (wik - W[i, l] - wjk + W[j, l]) * rij * invr[k, l]
                    f2 = (base2 - W[k, l] + W[j, l]) * rkj * invr[i, l]
                    acc += f1 * f2
    return acc
