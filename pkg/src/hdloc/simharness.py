"""Replication engine for the empirical size/power tables.

Every replication r of a configuration draws one sample from the substream
SeedSequence(master_seed, spawn_key=(phase, r)) and evaluates all requested
tests on it (common random numbers across tests and, because the Gaussian
block is drawn before the mean shift is applied, across mean allocations).
Phase 0 feeds size/power runs; phase 1 feeds the null simulations behind
size-corrected critical values, so those stay independent of the power draws.

Rejection counts are integer sums of per-replication booleans, so results are
bit-identical for any worker count. Completed cells persist as one JSON
record keyed by the configuration hash; re-running a persisted cell is a
no-op.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from . import stats
from .core_math import scatter_sqrt
from .samplers import MeanSpec, ScenarioSpec, sample_rows, theta_vector

PHASE_MAIN = 0
PHASE_NULL = 1

KNOWN_TESTS = ("cq", "ss", "sr", "tsr")


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation cell: scenario x (n, p) x allocation x tests."""

    scenario: ScenarioSpec
    n: int
    p: int
    allocation: str
    signal: float
    tests: tuple[str, ...]
    alpha: float = 0.05
    reps: int = 2500
    master_seed: int = 0
    size_corrected: bool = False
    null_reps: int = 2500
    trace_mode: str = "reduced"
    share_calibrated: bool = False

    def __post_init__(self):
        if self.p != self.scenario.p:
            raise ValueError(f"ExperimentConfig: p={self.p} does not match scenario p={self.scenario.p}")
        if self.allocation not in ("null", "dense", "sparse"):
            raise ValueError(f"ExperimentConfig: unknown allocation {self.allocation!r}")
        unknown = [t for t in self.tests if t not in KNOWN_TESTS]
        if unknown:
            raise ValueError(f"ExperimentConfig: unknown tests {unknown}")
        if self.size_corrected and self.null_reps < 2000:
            raise ValueError("ExperimentConfig: size_corrected runs need null_reps >= 2000")
        if "tsr" in self.tests and self.n <= self.p:
            raise ValueError("ExperimentConfig: tsr requires n > p")
        if self.reps < 1:
            raise ValueError("ExperimentConfig: reps must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("ExperimentConfig: alpha must lie in (0, 1)")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["scenario"] = self.scenario.to_dict()
        d["tests"] = list(self.tests)
        return d


def config_key(config: ExperimentConfig, extra: dict | None = None) -> str:
    payload = config.to_dict()
    if extra:
        payload["__extra__"] = extra
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:20]


@dataclass(frozen=True)
class PowerRow:
    test: str
    scenario: str
    n: int
    p: int
    allocation: str
    rejections: int
    reps: int
    rejection_rate: float
    mc_stderr: float
    master_seed: int
    wall_time: float


@dataclass(frozen=True)
class PowerTable:
    key: str
    config: dict
    rows: tuple[PowerRow, ...]

    def row(self, test: str) -> PowerRow:
        for r in self.rows:
            if r.test == test:
                return r
        raise KeyError(test)


def _rep_rng(master_seed: int, phase: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(phase, rep)))


def _raw_statistic(name: str, X, gram=None):
    if name == "sr":
        return stats.sr_statistic_fast(X)
    if name == "ss":
        return stats.ss_statistic(X, gram=gram)
    if name == "cq":
        return stats.cq_statistic(X, gram=gram)
    if name == "tsr":
        return stats.tsr_statistic(X)
    raise ValueError(f"unknown test {name!r}")


def _evaluate_rep(X, tests, alpha, trace_mode, crit):
    """Map test name -> bool rejection for one sample.

    With `crit` set, compares raw statistics against simulated critical
    values; otherwise standardizes and uses the asymptotic normal quantile.
    """
    out = {}
    gram = X @ X.T
    for t in tests:
        if crit is not None:
            out[t] = bool(_raw_statistic(t, X, gram=gram) > crit[t])
        elif t == "sr":
            out[t] = stats.sr_test(X, alpha=alpha, trace_mode=trace_mode, gram=gram).reject
        elif t == "ss":
            out[t] = stats.ss_test(X, alpha=alpha, gram=gram).reject
        elif t == "cq":
            out[t] = stats.cq_test(X, alpha=alpha, gram=gram).reject
        else:
            raise ValueError("tsr has no asymptotic calibration; use size_corrected=True")
    return out


def _chunk_counts(args):
    """Worker: rejection counts over a contiguous replication range."""
    config, theta, L, lo, hi, crit = args
    counts = dict.fromkeys(config.tests, 0)
    for r in range(lo, hi):
        rng = _rep_rng(config.master_seed, PHASE_MAIN, r)
        X = sample_rows(config.scenario, theta, L, config.n, rng)
        try:
            rej = _evaluate_rep(X, config.tests, config.alpha, config.trace_mode, crit)
        except Exception as exc:
            raise RuntimeError(f"replication {r}: {exc}") from exc
        for t, flag in rej.items():
            counts[t] += int(flag)
    return counts


def _chunk_raws(args):
    """Worker: raw null statistics over a contiguous replication range."""
    config, L, lo, hi, statistic = args
    zeros = np.zeros(config.p)
    out = np.empty(hi - lo)
    for r in range(lo, hi):
        rng = _rep_rng(config.master_seed, PHASE_NULL, r)
        X = sample_rows(config.scenario, zeros, L, config.n, rng)
        try:
            out[r - lo] = _raw_statistic(statistic, X)
        except Exception as exc:
            raise RuntimeError(f"null replication {r} ({statistic}): {exc}") from exc
    return lo, out


def _resolve_threads(threads) -> int:
    if threads in (None, "auto"):
        return os.cpu_count() or 1
    return max(int(threads), 1)


def _chunk_ranges(total: int, workers: int):
    size = max(32, math.ceil(total / (workers * 4)))
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _map_chunks(fn, payloads, workers: int):
    if workers <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads))


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def _store_path(results_dir: str, kind: str, key: str) -> str:
    return os.path.join(results_dir, kind, f"{key}.json")


def _load_record(path: str):
    if path and os.path.exists(path):
        with open(path) as fh:
            return json.load(fh)
    return None


def _save_record(path: str, payload: dict):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Critical values and experiments
# ---------------------------------------------------------------------------

def simulate_critical_value(config: ExperimentConfig, statistic: str,
                            results_dir: str | None = None, threads=1) -> float:
    """Empirical upper-alpha quantile of a raw statistic under the null.

    Uses the order statistic at 1-based index ceil((1-alpha) * null_reps)
    (the conservative upper convention). Null draws live in their own
    substream phase, independent of the power draws.
    """
    if config.allocation != "null":
        config = dataclasses.replace(config, allocation="null")
    if statistic not in KNOWN_TESTS:
        raise ValueError(f"unknown statistic {statistic!r}")
    key = config_key(config, extra={"critical_value": statistic})
    path = _store_path(results_dir, "crit", key) if results_dir else None
    rec = _load_record(path) if path else None
    if rec is not None:
        return float(rec["critical_value"])

    workers = _resolve_threads(threads)
    L = scatter_sqrt(config.scenario.scatter)
    payloads = [(config, L, lo, hi, statistic) for lo, hi in _chunk_ranges(config.null_reps, workers)]
    raws = np.empty(config.null_reps)
    for lo, vals in _map_chunks(_chunk_raws, payloads, workers):
        raws[lo:lo + len(vals)] = vals
    k = math.ceil((1.0 - config.alpha) * config.null_reps)
    crit = float(np.sort(raws)[k - 1])
    if path:
        _save_record(path, {"config": config.to_dict(), "statistic": statistic,
                            "critical_value": crit, "order_index": k})
    return crit


def run_experiment(config: ExperimentConfig, results_dir: str | None = None,
                   threads=1) -> PowerTable:
    """Run one cell: `reps` replications, all requested tests per sample.

    Returns (and, with results_dir, persists) one PowerRow per test. A cell
    whose record already exists is loaded instead of recomputed.
    """
    key = config_key(config)
    path = _store_path(results_dir, "cells", key) if results_dir else None
    rec = _load_record(path) if path else None
    if rec is not None:
        rows = tuple(PowerRow(**r) for r in rec["rows"])
        return PowerTable(key=key, config=rec["config"], rows=rows)

    t0 = time.time()
    crit = None
    if config.size_corrected:
        crit = {t: simulate_critical_value(config, t, results_dir=results_dir, threads=threads)
                for t in config.tests}
    mean = MeanSpec(config.allocation, 0.0 if config.allocation == "null" else config.signal,
                    config.p, share_calibrated=config.share_calibrated)
    theta = theta_vector(mean, config.scenario)
    L = scatter_sqrt(config.scenario.scatter)

    workers = _resolve_threads(threads)
    payloads = [(config, theta, L, lo, hi, crit) for lo, hi in _chunk_ranges(config.reps, workers)]
    counts = dict.fromkeys(config.tests, 0)
    for chunk in _map_chunks(_chunk_counts, payloads, workers):
        for t, c in chunk.items():
            counts[t] += c
    wall = time.time() - t0

    rows = []
    for t in config.tests:
        rate = counts[t] / config.reps
        rows.append(PowerRow(test=t, scenario=config.scenario.label, n=config.n, p=config.p,
                             allocation=config.allocation, rejections=counts[t],
                             reps=config.reps, rejection_rate=rate,
                             mc_stderr=math.sqrt(rate * (1.0 - rate) / config.reps),
                             master_seed=config.master_seed, wall_time=wall))
    table = PowerTable(key=key, config=config.to_dict(), rows=tuple(rows))
    if path:
        _save_record(path, {"config": table.config,
                            "rows": [dataclasses.asdict(r) for r in table.rows]})
    return table
