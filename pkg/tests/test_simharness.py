"""Tests for the replication engine, critical values, and persistence."""

import dataclasses
import math

import pytest

from hdloc.core_math import ScatterSpec
from hdloc.samplers import ScenarioSpec
from hdloc.simharness import (
    ExperimentConfig,
    config_key,
    run_experiment,
    simulate_critical_value,
)
from hdloc.tables import T2_GRID, T3_GRID, T4_GRID, run_table


def small_config(**overrides):
    base = dict(
        scenario=ScenarioSpec.from_label("I", ScatterSpec.toeplitz(0.5, 20)),
        n=16, p=20, allocation="dense", signal=0.1,
        tests=("cq", "ss", "sr"), reps=120, master_seed=5,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_p_mismatch(self):
        with pytest.raises(ValueError, match="does not match"):
            small_config(p=21)

    def test_tsr_needs_tall(self):
        with pytest.raises(ValueError, match="n > p"):
            small_config(tests=("tsr",))

    def test_size_corrected_needs_null_reps(self):
        with pytest.raises(ValueError, match="null_reps"):
            small_config(size_corrected=True, null_reps=100)

    def test_unknown_test(self):
        with pytest.raises(ValueError, match="unknown tests"):
            small_config(tests=("sr", "hotelling"))

    def test_key_is_stable_and_sensitive(self):
        a, b = small_config(), small_config()
        assert config_key(a) == config_key(b)
        assert config_key(a) != config_key(small_config(master_seed=6))


class TestRunExperiment:
    def test_row_fields_consistent(self):
        table = run_experiment(small_config())
        for row in table.rows:
            assert row.rejections == round(row.rejection_rate * row.reps)
            assert row.mc_stderr == pytest.approx(
                math.sqrt(row.rejection_rate * (1 - row.rejection_rate) / row.reps))
            assert row.reps == 120

    def test_thread_count_invariance(self):
        cfg = small_config(reps=150)
        counts1 = [r.rejections for r in run_experiment(cfg, threads=1).rows]
        counts2 = [r.rejections for r in run_experiment(cfg, threads=2).rows]
        counts3 = [r.rejections for r in run_experiment(cfg, threads=3).rows]
        assert counts1 == counts2 == counts3

    def test_common_random_numbers_across_allocations(self):
        # same master seed: the null cell and the dense cell share noise, so
        # power >= size with very high probability at this signal
        null_t = run_experiment(small_config(allocation="null", signal=0.0))
        dense_t = run_experiment(small_config(signal=0.15))
        assert dense_t.row("sr").rejections >= null_t.row("sr").rejections

    def test_persistence_resume_no_op(self, tmp_path):
        cfg = small_config()
        d = str(tmp_path)
        first = run_experiment(cfg, results_dir=d)
        cell_files = list((tmp_path / "cells").iterdir())
        assert len(cell_files) == 1
        mtime = cell_files[0].stat().st_mtime_ns
        again = run_experiment(cfg, results_dir=d)
        assert cell_files[0].stat().st_mtime_ns == mtime
        assert [r.rejections for r in again.rows] == [r.rejections for r in first.rows]

    def test_statistic_error_names_replication(self):
        # n = 4 with tsr (needs n > p) cannot be configured; force an error
        # through a degenerate scenario instead: constant rows break ss
        cfg = small_config(tests=("cq", "ss", "sr"), reps=5)
        bad = dataclasses.replace(cfg, n=3)
        with pytest.raises(RuntimeError, match="replication 0.*distinct quadruples"):
            run_experiment(bad)


class TestCriticalValues:
    def test_quantile_index_convention(self):
        # alpha = 0.05, null_reps = 2500 -> 1-based order statistic 2375
        assert math.ceil(0.95 * 2500) == 2375

    def test_null_recalibration_is_accurate(self):
        spec = ScenarioSpec.from_label("I", ScatterSpec.toeplitz(0.5, 16))
        cfg = ExperimentConfig(scenario=spec, n=20, p=16, allocation="null", signal=0.0,
                               tests=("sr",), reps=600, master_seed=11,
                               size_corrected=True, null_reps=2000)
        table = run_experiment(cfg)
        rate = table.row("sr").rejection_rate
        assert abs(rate - 0.05) <= 0.02

    def test_deterministic_per_seed(self):
        spec = ScenarioSpec.from_label("II", ScatterSpec.toeplitz(0.5, 12))
        cfg = ExperimentConfig(scenario=spec, n=18, p=12, allocation="null", signal=0.0,
                               tests=("sr",), reps=10, master_seed=3, null_reps=2000,
                               size_corrected=True)
        a = simulate_critical_value(cfg, "sr")
        b = simulate_critical_value(cfg, "sr")
        assert a == b

    def test_crit_cache_shared_across_allocations(self, tmp_path):
        spec = ScenarioSpec.from_label("I", ScatterSpec.toeplitz(0.5, 20))
        base = dict(scenario=spec, n=24, p=20, signal=0.1, tests=("sr",),
                    reps=50, master_seed=4, size_corrected=True, null_reps=2000)
        d = str(tmp_path)
        run_experiment(ExperimentConfig(allocation="dense", **base), results_dir=d)
        crit_files = list((tmp_path / "crit").iterdir())
        assert len(crit_files) == 1
        mtime = crit_files[0].stat().st_mtime_ns
        run_experiment(ExperimentConfig(allocation="sparse", **base), results_dir=d)
        assert len(list((tmp_path / "crit").iterdir())) == 1
        assert crit_files[0].stat().st_mtime_ns == mtime


class TestRunTable:
    def test_t3_grid_shape(self):
        assert T3_GRID["scenarios"] == ("I", "II", "III")
        assert T3_GRID["p"] == (100, 200, 400)
        assert T3_GRID["signal"] == 0.05
        assert T4_GRID["scenarios"] == ("IV", "V")

    def test_t2_grid_shape(self):
        assert T2_GRID["cells"] == ((30, 24), (40, 32))
        assert T2_GRID["tests"] == ("tsr", "sr")
        assert T2_GRID["signal"] == 0.1

    def test_unknown_table(self):
        with pytest.raises(ValueError, match="unknown table"):
            run_table("T9")

    def test_t1_rows_have_references(self):
        art = run_table("T1", are_p=100, are_reps=1000, master_seed=1)
        assert art.kind == "are"
        assert len(art.rows) == 24
        for row in art.rows:
            assert row["reference"] > 0
            assert row["deviation"] == pytest.approx(row["value"] - row["reference"], abs=1e-9)

    @pytest.mark.slow
    def test_t3_smoke_tiny(self, tmp_path):
        art = run_table("T3", reps=40, master_seed=2, results_dir=str(tmp_path))
        assert len(art.rows) == 3 * 6 * 3 * 3  # scenarios x (n,p) x allocations x tests
        for row in art.rows:
            assert row["reference"] is not None
