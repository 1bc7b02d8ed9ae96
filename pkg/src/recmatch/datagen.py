"""Synthetic market generator mixing global popularity with private taste."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exam import ExaminationFunction, canonical_kind
from .model import Instance


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic market draw.

    lam in [0, 1] mixes a linear popularity score (index-proportional on the
    opposite side) with iid Uniform[0,1) taste; lam=1 makes all agents on a
    side share identical preferences, lam=0 is pure idiosyncratic taste.
    """

    n: int
    m: int
    lam: float
    exam_kind: str = "inverse"
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise ValueError("popularity scores need n >= 2 and m >= 2")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        object.__setattr__(self, "exam_kind", canonical_kind(self.exam_kind))


def synth_instance(spec: SynthSpec) -> Instance:
    """Draw an instance; deterministic for a given spec.

    The stream is PCG64 seeded with spec.seed; uniforms are consumed in
    row-major order, the full left-to-right matrix before the right-to-left
    one. Draws are from the half-open interval [0, 1).
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    u1 = rng.random((spec.n, spec.m))
    u2 = rng.random((spec.m, spec.n))
    pop_right = np.arange(spec.m) / (spec.m - 1)
    pop_left = np.arange(spec.n) / (spec.n - 1)
    p1 = spec.lam * pop_right[None, :] + (1.0 - spec.lam) * u1
    p2 = spec.lam * pop_left[None, :] + (1.0 - spec.lam) * u2
    return Instance(p1, p2, ExaminationFunction(kind=spec.exam_kind))
