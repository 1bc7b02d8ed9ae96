"""Sweep harness: run methods over a grid of synthetic markets, emit raw
per-trial CSV rows (aggregation belongs to the plotting layer).

Within one grid cell every method sees the identical instance per trial
(shared derived seed), so method comparisons are paired.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import baselines, fw, model
from .datagen import SynthSpec, synth_instance
from .exam import KIND_TO_LABEL, canonical_kind
from .model import Instance, Policy

METHODS = ("uniform", "naive", "prod", "iterlp", "sw", "nsw")

CSV_HEADER = (
    "method,n,m,lambda,exam,trial,expected_matches,envy_left,envy_right,"
    "max_envy_left,max_envy_right,runtime_ms,seed"
)

#: Sweep-quality solver budgets. The fairness solve starts from the matching
#: heuristic: the uniform start reproducibly converges to stationary points
#: that keep a handful of envy pairs on desk-scale markets, while the greedy
#: start preserves the near-zero-envy behavior the method is chosen for.
DEFAULT_SOLVER_OVERRIDES = {
    "sw": {"max_iterations": 200},
    "nsw": {"max_iterations": 400, "init": "greedy"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: grids, methods, trials, seeds, solver overrides.

    solver maps either field overrides applied to both solver methods, or
    per-method dicts under the keys "sw" / "nsw". runtime_ms is written as
    0.0 unless record_runtime is set, keeping output bytes reproducible.
    """

    n_values: tuple[int, ...] = (20,)
    m: int = 20
    lambdas: tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
    exam_kinds: tuple[str, ...] = ("inverse", "logarithmic")
    methods: tuple[str, ...] = METHODS
    trials: int = 10
    base_seed: int = 0
    solver: dict = field(default_factory=lambda: dict(DEFAULT_SOLVER_OVERRIDES))
    tau: float = 1e-9
    iterlp_k: int | None = None
    record_runtime: bool = False
    output: str = "experiment.csv"

    def __post_init__(self):
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if not self.lambdas:
            raise ValueError("lambdas must be non-empty")
        if not self.exam_kinds:
            raise ValueError("exam_kinds must be non-empty")
        if not self.methods:
            raise ValueError("methods must be non-empty")
        object.__setattr__(
            self, "exam_kinds", tuple(canonical_kind(k) for k in self.exam_kinds)
        )
        for meth in self.methods:
            if meth not in METHODS:
                raise ValueError(f"unknown method {meth!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        valid = {f.name for f in fields(cls)}
        unknown = set(data) - valid
        if unknown:
            raise ValueError(f"unknown experiment config fields: {sorted(unknown)}")
        data = dict(data)
        for key in ("n_values", "lambdas", "exam_kinds", "methods"):
            if key in data:
                data[key] = tuple(data[key])
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ExperimentRecord:
    """One (method, grid cell, trial) row of metrics."""

    method: str
    n: int
    m: int
    lam: float
    exam: str
    trial: int
    expected_matches: float
    envy_left: int
    envy_right: int
    max_envy_left: float
    max_envy_right: float
    runtime_ms: float
    seed: int

    def csv_row(self, record_runtime: bool) -> str:
        runtime = self.runtime_ms if record_runtime else 0.0
        return ",".join(
            [
                self.method,
                str(self.n),
                str(self.m),
                repr(float(self.lam)),
                KIND_TO_LABEL[self.exam],
                str(self.trial),
                repr(float(self.expected_matches)),
                str(self.envy_left),
                str(self.envy_right),
                repr(float(self.max_envy_left)),
                repr(float(self.max_envy_right)),
                repr(float(runtime)),
                str(self.seed),
            ]
        )


def _solver_config(objective: str, overrides: dict) -> fw.SolverConfig:
    if "sw" in overrides or "nsw" in overrides:
        per_method = dict(overrides.get(objective.lower(), {}))
    else:
        per_method = dict(overrides)
    base = fw.SolverConfig(objective=objective)
    return fw.config_with_overrides(base, per_method)


def build_policy(
    inst: Instance,
    method: str,
    solver_overrides: dict | None = None,
    iterlp_k: int | None = None,
) -> Policy:
    solver_overrides = solver_overrides or {}
    if method == "uniform":
        return model.uniform_policy(inst.n, inst.m)
    if method == "naive":
        return baselines.naive_policy(inst)
    if method == "prod":
        return baselines.prod_policy(inst)
    if method == "iterlp":
        return baselines.iter_lp_policy(inst, iterlp_k)
    if method in ("sw", "nsw"):
        cfg = _solver_config(method.upper(), solver_overrides)
        policy, _ = fw.solve(inst, cfg)
        return policy
    raise ValueError(f"unknown method {method!r}")


def run_single(
    inst: Instance,
    method: str,
    solver_overrides: dict | None = None,
    tau: float = 1e-9,
    *,
    lam: float = math.nan,
    trial: int = 0,
    seed: int = 0,
    iterlp_k: int | None = None,
) -> ExperimentRecord:
    """Produce, validate, and audit one method's policy on one instance."""
    start = time.perf_counter()
    policy = build_policy(inst, method, solver_overrides, iterlp_k)
    model.assert_valid_policy(inst, policy)
    report = model.envy_audit(inst, policy, tau)
    sw = model.social_welfare(inst, policy)
    runtime_ms = (time.perf_counter() - start) * 1000.0
    return ExperimentRecord(
        method=method,
        n=inst.n,
        m=inst.m,
        lam=lam,
        exam=inst.exam.kind,
        trial=trial,
        expected_matches=sw,
        envy_left=report.left_envy_pairs,
        envy_right=report.right_envy_pairs,
        max_envy_left=report.max_left_envy,
        max_envy_right=report.max_right_envy,
        runtime_ms=runtime_ms,
        seed=seed,
    )


def _error_record(method, n, m, lam, exam, trial, seed) -> ExperimentRecord:
    return ExperimentRecord(
        method=method,
        n=n,
        m=m,
        lam=lam,
        exam=exam,
        trial=trial,
        expected_matches=math.nan,
        envy_left=0,
        envy_right=0,
        max_envy_left=math.nan,
        max_envy_right=math.nan,
        runtime_ms=math.nan,
        seed=seed,
    )


def run_experiment(cfg: ExperimentConfig, output=None) -> list[ExperimentRecord]:
    """Run the sweep, write the CSV (and an error sidecar if anything fails),
    and return the records in the emitted order."""
    output = Path(output or cfg.output)
    records: list[ExperimentRecord] = []
    errors: list[str] = []
    for n in cfg.n_values:
        for exam_kind in cfg.exam_kinds:
            for lam in cfg.lambdas:
                for trial in range(cfg.trials):
                    seed = cfg.base_seed + trial
                    spec = SynthSpec(
                        n=n, m=cfg.m, lam=lam, exam_kind=exam_kind, seed=seed
                    )
                    inst = synth_instance(spec)
                    for method in cfg.methods:
                        try:
                            rec = run_single(
                                inst,
                                method,
                                cfg.solver,
                                cfg.tau,
                                lam=lam,
                                trial=trial,
                                seed=seed,
                                iterlp_k=cfg.iterlp_k,
                            )
                        except Exception as exc:  # failures become NaN rows
                            rec = _error_record(
                                method, n, cfg.m, lam, exam_kind, trial, seed
                            )
                            errors.append(
                                f"{method},n={n},m={cfg.m},lambda={lam},"
                                f"exam={KIND_TO_LABEL[exam_kind]},trial={trial}: {exc}"
                            )
                        records.append(rec)
    records.sort(
        key=lambda r: (r.n, KIND_TO_LABEL[r.exam], r.lam, r.method, r.trial)
    )
    lines = [CSV_HEADER] + [r.csv_row(cfg.record_runtime) for r in records]
    output.write_text("\n".join(lines) + "\n")
    if errors:
        Path(str(output) + ".errors.log").write_text("\n".join(errors) + "\n")
    return records


def load_records(path) -> list[dict]:
    """Parse a harness CSV back into dicts with typed fields."""
    text = Path(path).read_text().strip().split("\n")
    if not text or text[0] != CSV_HEADER:
        raise ValueError("not a harness CSV (unexpected header)")
    out = []
    cols = CSV_HEADER.split(",")
    for line in text[1:]:
        parts = line.split(",")
        row = dict(zip(cols, parts))
        for key in ("n", "m", "trial", "envy_left", "envy_right", "seed"):
            row[key] = int(row[key])
        for key in (
            "lambda",
            "expected_matches",
            "max_envy_left",
            "max_envy_right",
            "runtime_ms",
        ):
            row[key] = float(row[key])
        out.append(row)
    return out


def mean_by_cell(records: list[dict], metric: str) -> dict:
    """Mean of a metric grouped by (n, exam, lambda, method)."""
    groups: dict[tuple, list[float]] = {}
    for row in records:
        key = (row["n"], row["exam"], row["lambda"], row["method"])
        groups.setdefault(key, []).append(row[metric])
    return {k: float(np.mean(v)) for k, v in groups.items()}
