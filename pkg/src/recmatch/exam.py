"""Position-discount examination functions for ranked recommendation lists."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KIND_INVERSE = "inverse"
KIND_LOGARITHMIC = "logarithmic"

# Short labels used in JSON files and CSV columns.
KIND_TO_LABEL = {KIND_INVERSE: "inv", KIND_LOGARITHMIC: "log"}
LABEL_TO_KIND = {v: k for k, v in KIND_TO_LABEL.items()}


def canonical_kind(kind: str) -> str:
    """Accept either the full kind name or its short label."""
    if kind in KIND_TO_LABEL:
        return kind
    if kind in LABEL_TO_KIND:
        return LABEL_TO_KIND[kind]
    raise ValueError(f"unknown examination kind: {kind!r}")


@dataclass(frozen=True)
class ExaminationFunction:
    """Rank discount v(k): how likely position k of a list gets examined.

    kind "inverse" uses 1/k and "logarithmic" uses 1/log2(k+1), both equal to
    1 at the top position. Positions past the truncation threshold K (when
    set) are never examined, so v(k) = 0 there. K=None means no truncation.
    """

    kind: str = KIND_INVERSE
    K: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", canonical_kind(self.kind))
        if self.K is not None:
            if int(self.K) != self.K or self.K < 1:
                raise ValueError("truncation threshold K must be a positive integer")
            object.__setattr__(self, "K", int(self.K))

    @property
    def label(self) -> str:
        return KIND_TO_LABEL[self.kind]

    def value(self, k: int) -> float:
        """v(k) for a 1-based position k."""
        if int(k) != k or k < 1:
            raise ValueError("positions are 1-based integers")
        if self.K is not None and k > self.K:
            return 0.0
        if self.kind == KIND_INVERSE:
            return 1.0 / k
        return float(1.0 / np.log2(k + 1.0))

    def values(self, count: int) -> np.ndarray:
        """Vector (v(1), ..., v(count))."""
        ks = np.arange(1, count + 1, dtype=np.float64)
        if self.kind == KIND_INVERSE:
            out = 1.0 / ks
        else:
            out = 1.0 / np.log2(ks + 1.0)
        if self.K is not None:
            out[ks > self.K] = 0.0
        return out


def examination_value(exam: ExaminationFunction, k: int) -> float:
    """Functional alias for ``exam.value(k)``."""
    return exam.value(k)
