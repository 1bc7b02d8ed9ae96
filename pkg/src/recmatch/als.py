"""Preference estimation from interaction logs via implicit-feedback ALS.

Input is a log of directed binary actions (one side liking/passing on the
other); each direction is factorized separately with confidence-weighted
alternating least squares, and the raw scores are min-max normalized into
[0, 1] preference probabilities.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DIRECTION_LR = "lr"
DIRECTION_RL = "rl"
SIGNAL_POS = "pos"
SIGNAL_NEG = "neg"

LOG_HEADER = ["left_id", "right_id", "direction", "signal"]


class InsufficientInteractionsError(ValueError):
    """Raised when a direction has no positive signals to fit on."""


@dataclass(frozen=True)
class AlsConfig:
    dim: int = 32
    reg: float = 0.1
    alpha: float = 40.0
    iterations: int = 15
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("latent dimension must be >= 1")
        if not self.reg > 0:
            raise ValueError("regularization must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


class InteractionLog:
    """Directed interaction records with dense re-indexed id vocabularies."""

    def __init__(self, records):
        self.records = []
        left_ids: set[str] = set()
        right_ids: set[str] = set()
        for rec in records:
            left_id, right_id, direction, signal = (str(x) for x in rec)
            if direction not in (DIRECTION_LR, DIRECTION_RL):
                raise ValueError(f"direction must be 'lr' or 'rl', got {direction!r}")
            if signal not in (SIGNAL_POS, SIGNAL_NEG):
                raise ValueError(f"signal must be 'pos' or 'neg', got {signal!r}")
            left_ids.add(left_id)
            right_ids.add(right_id)
            self.records.append((left_id, right_id, direction, signal))
        self.left_ids = tuple(sorted(left_ids))
        self.right_ids = tuple(sorted(right_ids))
        self._left_index = {x: i for i, x in enumerate(self.left_ids)}
        self._right_index = {x: j for j, x in enumerate(self.right_ids)}

    @classmethod
    def from_csv(cls, path) -> "InteractionLog":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != LOG_HEADER:
                raise ValueError(
                    f"interaction log must start with header {','.join(LOG_HEADER)}"
                )
            return cls(tuple(row) for row in reader if row)

    @property
    def n(self) -> int:
        return len(self.left_ids)

    @property
    def m(self) -> int:
        return len(self.right_ids)

    def positive_counts(self, direction: str) -> np.ndarray:
        """Positive-signal counts: (n, m) for 'lr', (m, n) for 'rl'."""
        if direction == DIRECTION_LR:
            out = np.zeros((self.n, self.m))
        elif direction == DIRECTION_RL:
            out = np.zeros((self.m, self.n))
        else:
            raise ValueError(f"unknown direction {direction!r}")
        for left_id, right_id, rec_dir, signal in self.records:
            if rec_dir != direction or signal != SIGNAL_POS:
                continue
            i = self._left_index[left_id]
            j = self._right_index[right_id]
            if direction == DIRECTION_LR:
                out[i, j] += 1.0
            else:
                out[j, i] += 1.0
        return out


def normalize_scores(raw: np.ndarray) -> np.ndarray:
    """Min-max map into [0, 1]; a constant matrix maps to all 0.5."""
    raw = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(raw)):
        raise ValueError("scores must be finite")
    lo = float(raw.min())
    hi = float(raw.max())
    if hi == lo:
        return np.full(raw.shape, 0.5)
    return (raw - lo) / (hi - lo)


def _als_objective(P, C, X, Y, reg) -> float:
    resid = P - X @ Y.T
    return float(np.sum(C * resid**2) + reg * (np.sum(X**2) + np.sum(Y**2)))


def _solve_side(P, C, other, reg):
    # Closed-form ridge solve per row: (Y' diag(c) Y + reg I)^-1 Y' (c * p).
    dim = other.shape[1]
    out = np.empty((P.shape[0], dim))
    eye = reg * np.eye(dim)
    for r in range(P.shape[0]):
        cw = C[r][:, None] * other
        gram = other.T @ cw + eye
        rhs = cw.T @ P[r]
        out[r] = np.linalg.solve(gram, rhs)
    return out


def _implicit_als(pos_counts: np.ndarray, cfg: AlsConfig, seed: int):
    """Confidence-weighted ALS on binary preferences.

    Positive observations get preference 1 with confidence 1 + alpha * count;
    everything else (including explicit negatives) is preference 0 with
    confidence 1. Returns (scores, per-sweep objective history).
    """
    P = (pos_counts > 0).astype(np.float64)
    C = 1.0 + cfg.alpha * pos_counts
    rng = np.random.Generator(np.random.PCG64(seed))
    scale = 0.1 / np.sqrt(cfg.dim)
    X = scale * rng.standard_normal((P.shape[0], cfg.dim))
    Y = scale * rng.standard_normal((P.shape[1], cfg.dim))
    history = [_als_objective(P, C, X, Y, cfg.reg)]
    for _ in range(cfg.iterations):
        X = _solve_side(P, C, Y, cfg.reg)
        Y = _solve_side(P.T, C.T, X, cfg.reg)
        history.append(_als_objective(P, C, X, Y, cfg.reg))
    return X @ Y.T, history


def fit_preferences(
    log: InteractionLog, cfg: AlsConfig | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Estimate both preference matrices from the log.

    Returns (p1, p2) with shapes (n, m) and (m, n) over the log's id
    vocabularies, each min-max normalized into [0, 1]. Deterministic given
    cfg.seed (the two directions use seed and seed + 1).
    """
    cfg = cfg or AlsConfig()
    estimates = []
    for offset, direction in enumerate((DIRECTION_LR, DIRECTION_RL)):
        counts = log.positive_counts(direction)
        if counts.size == 0 or not np.any(counts > 0):
            raise InsufficientInteractionsError(
                f"no positive interactions in direction {direction!r}"
            )
        scores, _ = _implicit_als(counts, cfg, cfg.seed + offset)
        estimates.append(normalize_scores(scores))
    return estimates[0], estimates[1]
