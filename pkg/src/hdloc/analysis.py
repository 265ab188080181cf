"""Asymptotic power formulas and Monte Carlo efficiency comparisons.

The three tests differ asymptotically only through moments of the
standardized variate eps = Sigma^{-1/2}(X - theta):

    ARE(SS, CQ) = (E ||eps||^-1)^2 * E ||eps||^2
    ARE(SR, CQ) = 2 (E ||eps1 + eps2||^-1)^2 * E ||eps||^2
    ARE(SR, SS) = 2 (E ||eps1 + eps2||^-1)^2 / (E ||eps||^-1)^2

All moments are estimated by plain Monte Carlo over full-dimensional draws,
deterministic per seed. The pair-sum reciprocal moment with the scenario's
actual scatter (c0 = E ||X_i + X_j||^-1 under the null) feeds the
signed-rank power formula.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .core_math import ScatterSpec, scatter_sqrt
from .samplers import ELLIPTICAL_KINDS, ScenarioSpec, draw_standardized

_CHUNK = 512


@dataclass(frozen=True)
class MomentEstimates:
    """Monte Carlo moments of the standardized variate (identity scatter)
    plus the pair-sum reciprocal norm under the scenario's scatter."""

    kind: str
    p: int
    reps: int
    c0: float
    m2: float
    minv: float
    mpairinv: float
    se_c0: float
    se_m2: float
    se_minv: float
    se_mpairinv: float

    def __post_init__(self):
        for name in ("c0", "m2", "minv", "mpairinv"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"MomentEstimates: {name} must be positive and finite, got {v}")


class _Acc:
    """Streaming mean / standard-error accumulator."""

    def __init__(self):
        self.n = 0
        self.s = 0.0
        self.s2 = 0.0

    def add(self, values: np.ndarray):
        self.n += values.size
        self.s += float(values.sum())
        self.s2 += float((values * values).sum())

    @property
    def mean(self) -> float:
        return self.s / self.n

    @property
    def se(self) -> float:
        var = max(self.s2 / self.n - self.mean ** 2, 0.0)
        return math.sqrt(var / self.n)


def _identity_spec(spec: ScenarioSpec, p: int) -> ScenarioSpec:
    return ScenarioSpec(kind=spec.kind, scatter=ScatterSpec.identity(p),
                        df=spec.df, gamma=spec.gamma, tau=spec.tau)


def _radial_scales(spec: ScenarioSpec, m: int, rng: np.random.Generator) -> np.ndarray:
    """Per-row radial scale s with eps = s * g for the elliptical kinds."""
    if spec.kind == "normal":
        return np.ones(m)
    if spec.kind == "mvt":
        w = rng.chisquare(spec.df, size=m)
        return np.sqrt(spec.df / w)
    u = rng.random(m)
    return np.where(u < spec.gamma, spec.tau, 1.0)


def estimate_moments(spec: ScenarioSpec, p: int, reps: int, seed) -> MomentEstimates:
    """Monte Carlo estimates of E||eps||^2, E||eps||^-1, E||eps1+eps2||^-1
    (identity scatter) and c0 = E||X1+X2||^-1 under the scenario's scatter.

    Deterministic per (spec, p, reps, seed); reps >= 1000 required.

    The elliptical kinds factor as eps = s * g with g Gaussian and s the
    radial scale. For E||eps||^2 the scale is integrated analytically per
    draw (E||eps||^2 | g = kappa ||g||^2, conditional Monte Carlo): the plain
    average of s^2 ||g||^2 has an infinite-variance summand for t degrees of
    freedom <= 4. The reciprocal moments are light tailed and use the
    sampled scales directly.
    """
    if spec.kind not in ELLIPTICAL_KINDS:
        raise ValueError(f"estimate_moments: requires an elliptical kind, got {spec.kind!r}")
    if reps < 1000:
        raise ValueError("estimate_moments: reps must be >= 1000")

    from .samplers import covariance_factor

    kappa = covariance_factor(spec)
    identity_scatter = spec.scatter.p == p and spec.scatter.is_identity
    L = None if identity_scatter else scatter_sqrt(ScatterSpec(spec.scatter.kind, p,
                                                               spec.scatter.rho, spec.scatter.matrix))
    rng = np.random.default_rng(seed)
    m2, minv, mpair, c0 = _Acc(), _Acc(), _Acc(), _Acc()
    done = 0
    while done < reps:
        m = min(_CHUNK, reps - done)
        g = rng.standard_normal((2 * m, p))
        s = _radial_scales(spec, 2 * m, rng)
        gnorms = np.linalg.norm(g, axis=1)
        m2.add(kappa * gnorms ** 2)
        minv.add(1.0 / (s * gnorms))
        pair = s[:m, None] * g[:m] + s[m:, None] * g[m:]
        mpair.add(1.0 / np.linalg.norm(pair, axis=1))
        if identity_scatter:
            c0.add(1.0 / np.linalg.norm(pair, axis=1))
        else:
            c0.add(1.0 / np.linalg.norm(pair @ L.T, axis=1))
        done += m

    return MomentEstimates(
        kind=spec.kind, p=p, reps=reps,
        c0=c0.mean, m2=m2.mean, minv=minv.mean, mpairinv=mpair.mean,
        se_c0=c0.se, se_m2=m2.se, se_minv=minv.se, se_mpairinv=mpair.se,
    )


# ---------------------------------------------------------------------------
# Asymptotic power under local alternatives
# ---------------------------------------------------------------------------

def asymptotic_power_sr(theta_norm2: float, trace_sigma2: float, c0: float,
                        n: int, p: int, alpha: float) -> float:
    """Signed-rank power: Phi(-z_alpha + 2 c0^2 p n theta'theta / sqrt(2 tr(Sigma^2)))."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    drift = 2.0 * c0 * c0 * p * n * theta_norm2 / math.sqrt(2.0 * trace_sigma2)
    return float(norm.cdf(-norm.isf(alpha) + drift))


def asymptotic_power_cq(theta_norm2: float, trace_sigma2: float, m2: float,
                        n: int, p: int, alpha: float) -> float:
    """Mean-test power: Phi(-z_alpha + n p theta'theta / (E||eps||^2 sqrt(2 tr(Sigma^2))))."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    drift = n * p * theta_norm2 / (m2 * math.sqrt(2.0 * trace_sigma2))
    return float(norm.cdf(-norm.isf(alpha) + drift))


# ---------------------------------------------------------------------------
# ARE table
# ---------------------------------------------------------------------------

def are_from_moments(m2: float, minv: float, mpairinv: float) -> dict[str, float]:
    return {
        "ss_cq": minv * minv * m2,
        "sr_cq": 2.0 * mpairinv * mpairinv * m2,
        "sr_ss": 2.0 * mpairinv * mpairinv / (minv * minv),
    }


#: distribution column order used by the efficiency table
ARE_DISTRIBUTIONS = ("t3", "t4", "t5", "t6", "t10", "normal", "mn_0.2_3", "mn_0.05_10")


def _are_spec(label: str, p: int) -> ScenarioSpec:
    ident = ScatterSpec.identity(p)
    if label == "normal":
        return ScenarioSpec.normal(ident)
    if label.startswith("t"):
        return ScenarioSpec.mvt(int(label[1:]), ident)
    if label.startswith("mn_"):
        _, gamma, tau = label.split("_")
        return ScenarioSpec.mixed_normal(float(gamma), float(tau), ident)
    raise ValueError(f"unknown ARE distribution label {label!r}")


@dataclass(frozen=True)
class AreRow:
    label: str
    ss_cq: float
    sr_cq: float
    sr_ss: float
    se_ss_cq: float
    se_sr_cq: float
    se_sr_ss: float


def are_table(labels=ARE_DISTRIBUTIONS, p: int = 2000, reps: int = 10000,
              seed: int = 0, batches: int = 20) -> list[AreRow]:
    """Monte Carlo efficiency table: one row per distribution.

    Point estimates come from pooled moments over all replications; standard
    errors from the spread of per-batch plug-in estimates.
    """
    rows = []
    for label in labels:
        spec = _are_spec(label, p)
        batch_reps = max(reps // batches, 1000)
        n_batches = max(reps // batch_reps, 1)
        per_batch = {"ss_cq": [], "sr_cq": [], "sr_ss": []}
        pooled = {"m2": 0.0, "minv": 0.0, "mpairinv": 0.0}
        for b in range(n_batches):
            est = estimate_moments(spec, p, batch_reps,
                                   np.random.SeedSequence(seed, spawn_key=(zlib.crc32(label.encode()), b)))
            for k, v in are_from_moments(est.m2, est.minv, est.mpairinv).items():
                per_batch[k].append(v)
            pooled["m2"] += est.m2
            pooled["minv"] += est.minv
            pooled["mpairinv"] += est.mpairinv
        point = are_from_moments(pooled["m2"] / n_batches, pooled["minv"] / n_batches,
                                 pooled["mpairinv"] / n_batches)
        ses = {k: float(np.std(v, ddof=1) / math.sqrt(n_batches)) if n_batches > 1 else 0.0
               for k, v in per_batch.items()}
        rows.append(AreRow(label=label, ss_cq=point["ss_cq"], sr_cq=point["sr_cq"],
                           sr_ss=point["sr_ss"], se_ss_cq=ses["ss_cq"],
                           se_sr_cq=ses["sr_cq"], se_sr_ss=ses["sr_ss"]))
    return rows


# ---------------------------------------------------------------------------
# Projected-sign second moment (nested Monte Carlo)
# ---------------------------------------------------------------------------

def tau_f_check(spec: ScenarioSpec, p_list, outer: int = 200, inner: int = 500,
                seed: int = 0) -> list[dict]:
    """Estimate tau_F = E ||u_i||^2 with u_i = E(sign(eps_i - eps_j) | eps_i).

    The inner conditional expectation is approximated by an inner Monte Carlo
    average; the squared norm of an inner average is inflated by the inner
    sampling variance, so the exact unbiased correction
    ||u_hat||^2 - (1 - ||u_hat||^2) / (inner - 1) is applied per outer draw.
    Tends to 1/2 as p grows; equals 1/3 at p = 1.
    """
    if spec.kind not in ELLIPTICAL_KINDS:
        raise ValueError(f"tau_f_check: requires an elliptical kind, got {spec.kind!r}")
    if inner < 100:
        raise ValueError("tau_f_check: inner loop too small (need >= 100 draws)")
    out = []
    for p in p_list:
        eps_spec = _identity_spec(spec, p)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(p,)))
        eps_outer = draw_standardized(eps_spec, outer, rng)
        vals = np.empty(outer)
        for i in range(outer):
            tilde = draw_standardized(eps_spec, inner, rng)
            D = eps_outer[i][None, :] - tilde
            norms = np.linalg.norm(D, axis=1)
            norms[norms == 0.0] = 1.0
            u_hat = (D / norms[:, None]).mean(axis=0)
            nsq = float(u_hat @ u_hat)
            vals[i] = nsq - (1.0 - nsq) / (inner - 1)
        out.append({"p": int(p), "tau_f": float(vals.mean()),
                    "se": float(vals.std(ddof=1) / math.sqrt(outer))})
    return out
