"""JSON file formats for instances, policies, and audit reports.

Instance files look like::

    {"n": 2, "m": 1, "p1": [[1.0], [1.0]], "p2": [[1.0, 0.5]],
     "exam": {"kind": "inv", "K": null}}

and policy files like ``{"A": [...], "B": [...]}`` with nested row-major
arrays. All reals are decimal doubles; serialization is byte-deterministic
for identical inputs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .exam import ExaminationFunction, canonical_kind
from .model import Instance, Policy


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "m": inst.m,
        "p1": inst.p1.tolist(),
        "p2": inst.p2.tolist(),
        "exam": {"kind": inst.exam.label, "K": inst.exam.K},
    }


def instance_from_dict(data: dict) -> Instance:
    try:
        exam_data = data["exam"]
        exam = ExaminationFunction(
            kind=canonical_kind(exam_data["kind"]), K=exam_data.get("K")
        )
        inst = Instance(data["p1"], data["p2"], exam)
    except KeyError as exc:
        raise ValueError(f"instance file missing field {exc.args[0]!r}") from exc
    if inst.n != data.get("n") or inst.m != data.get("m"):
        raise ValueError("instance file sizes n/m disagree with matrix shapes")
    return inst


def save_instance(path, inst: Instance) -> None:
    dump_json(instance_to_dict(inst), path)


def load_instance(path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def policy_to_dict(pol: Policy) -> dict:
    return {"A": pol.A.tolist(), "B": pol.B.tolist()}


def policy_from_dict(data: dict) -> Policy:
    try:
        return Policy(np.asarray(data["A"]), np.asarray(data["B"]))
    except KeyError as exc:
        raise ValueError(f"policy file missing field {exc.args[0]!r}") from exc


def save_policy(path, pol: Policy) -> None:
    dump_json(policy_to_dict(pol), path)


def load_policy(path) -> Policy:
    return policy_from_dict(json.loads(Path(path).read_text()))
