import json
import math

import numpy as np
import pytest

import recmatch as rm
from recmatch import experiment as harness
from recmatch.experiment import CSV_HEADER, ExperimentConfig

from conftest import example1_instance


def tiny_config(tmp_path, **kwargs):
    defaults = dict(
        n_values=(2,),
        m=2,
        lambdas=(0.0, 1.0),
        exam_kinds=("inverse",),
        methods=("naive",),
        trials=2,
        base_seed=0,
        solver={},
        output=str(tmp_path / "out.csv"),
    )
    defaults.update(kwargs)
    return ExperimentConfig(**defaults)


class TestRunSingle:
    def test_example1_naive_metrics(self):
        inst = example1_instance(0.5)
        rec = harness.run_single(inst, "naive", tau=1e-9)
        assert rec.expected_matches == pytest.approx(1.25, abs=1e-12)
        assert (rec.envy_left, rec.envy_right) == (1, 0)

    def test_example1_uniform_metrics(self):
        inst = example1_instance(0.5)
        rec = harness.run_single(inst, "uniform", tau=1e-9)
        assert rec.expected_matches == pytest.approx(1.125, abs=1e-12)
        assert (rec.envy_left, rec.envy_right) == (0, 0)

    def test_uniform_never_envies(self, rng):
        from conftest import random_instance

        for _ in range(5):
            inst = random_instance(rng, 4, 3)
            rec = harness.run_single(inst, "uniform", tau=0.0)
            assert (rec.envy_left, rec.envy_right) == (0, 0)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            harness.run_single(example1_instance(0.5), "magic")

    def test_runtime_measured(self):
        rec = harness.run_single(example1_instance(0.5), "naive")
        assert rec.runtime_ms >= 0.0


class TestRunExperiment:
    def test_row_count_and_header(self, tmp_path):
        cfg = tiny_config(tmp_path)
        records = harness.run_experiment(cfg)
        text = (tmp_path / "out.csv").read_text().strip().split("\n")
        assert text[0] == CSV_HEADER
        # 1 method x 1 n x 1 exam x 2 lambdas x 2 trials
        assert len(text) == 1 + 4
        assert len(records) == 4

    def test_rows_sorted_and_deterministic(self, tmp_path):
        cfg = tiny_config(
            tmp_path,
            methods=("prod", "naive", "uniform"),
            lambdas=(1.0, 0.0),
            exam_kinds=("logarithmic", "inverse"),
        )
        harness.run_experiment(cfg)
        first = (tmp_path / "out.csv").read_bytes()
        harness.run_experiment(cfg)
        assert (tmp_path / "out.csv").read_bytes() == first
        rows = harness.load_records(tmp_path / "out.csv")
        keys = [
            (r["n"], r["exam"], r["lambda"], r["method"], r["trial"]) for r in rows
        ]
        assert keys == sorted(keys)

    def test_methods_share_instances_within_cell(self, tmp_path):
        cfg = tiny_config(tmp_path, methods=("naive", "prod"), lambdas=(0.3,))
        records = harness.run_experiment(cfg)
        by_method = {}
        for rec in records:
            by_method.setdefault(rec.method, []).append(rec.seed)
        assert by_method["naive"] == by_method["prod"]

    def test_runtime_zeroed_by_default(self, tmp_path):
        cfg = tiny_config(tmp_path)
        harness.run_experiment(cfg)
        rows = harness.load_records(tmp_path / "out.csv")
        assert all(r["runtime_ms"] == 0.0 for r in rows)

    def test_runtime_recorded_when_asked(self, tmp_path):
        cfg = tiny_config(tmp_path, record_runtime=True)
        harness.run_experiment(cfg)
        rows = harness.load_records(tmp_path / "out.csv")
        assert any(r["runtime_ms"] > 0.0 for r in rows)

    def test_solver_methods_in_harness(self, tmp_path):
        cfg = tiny_config(
            tmp_path,
            methods=("sw", "nsw", "iterlp"),
            lambdas=(0.2,),
            trials=1,
            solver={"max_iterations": 30},
        )
        records = harness.run_experiment(cfg)
        assert all(math.isfinite(r.expected_matches) for r in records)

    def test_error_rows_and_sidecar(self, tmp_path, monkeypatch):
        cfg = tiny_config(tmp_path, methods=("naive",))

        def boom(inst):
            raise RuntimeError("synthetic failure")

        monkeypatch.setattr(harness.baselines, "naive_policy", boom)
        harness.run_experiment(cfg)
        rows = (tmp_path / "out.csv").read_text().strip().split("\n")
        assert len(rows) == 5  # schema stable: header + 4 NaN rows
        assert all("nan" in row for row in rows[1:])
        sidecar = tmp_path / "out.csv.errors.log"
        assert sidecar.exists()
        assert "synthetic failure" in sidecar.read_text()


class TestConfig:
    def test_from_dict_rejects_unknown_fields(self):
        with pytest.raises(ValueError, match="unknown"):
            ExperimentConfig.from_dict({"n_value": [2]})

    def test_from_dict_validates_values(self):
        with pytest.raises(ValueError):
            ExperimentConfig.from_dict({"methods": ["telepathy"]})
        with pytest.raises(ValueError):
            ExperimentConfig.from_dict({"trials": 0})
        with pytest.raises(ValueError):
            ExperimentConfig.from_dict({"lambdas": []})

    def test_from_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"n_values": [3], "m": 3, "trials": 1}))
        cfg = ExperimentConfig.from_json(path)
        assert cfg.n_values == (3,) and cfg.trials == 1
        # defaults carry the tuned solver budgets
        assert "nsw" in cfg.solver

    def test_mean_by_cell(self, tmp_path):
        cfg = tiny_config(tmp_path, methods=("uniform",), lambdas=(0.5,), trials=3)
        harness.run_experiment(cfg)
        rows = harness.load_records(tmp_path / "out.csv")
        means = harness.mean_by_cell(rows, "expected_matches")
        key = (2, "inv", 0.5, "uniform")
        expected = np.mean([r["expected_matches"] for r in rows])
        assert means[key] == pytest.approx(float(expected), abs=1e-15)
