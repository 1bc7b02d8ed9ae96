"""Deterministic comparison policies: preference-sorted rankings and the
round-by-round max-weight-matching heuristic."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assign import max_weight_matching
from .model import Instance, Policy


@dataclass(frozen=True)
class RankingList:
    """A deterministic ranking: order[k] is the agent shown at position k+1."""

    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("ranking must be a permutation of 0..d-1")

    def matrix(self) -> np.ndarray:
        d = len(self.order)
        out = np.zeros((d, d))
        out[list(self.order), np.arange(d)] = 1.0
        return out


def ranking_by_score(scores: np.ndarray) -> RankingList:
    """Sort descending; ties go to the smaller index."""
    order = np.argsort(-np.asarray(scores, dtype=np.float64), kind="stable")
    return RankingList(tuple(int(x) for x in order))


def naive_policy(inst: Instance) -> Policy:
    """Each agent ranks the other side by its own directed preference."""
    A = np.stack([ranking_by_score(inst.p1[i]).matrix() for i in range(inst.n)])
    B = np.stack([ranking_by_score(inst.p2[j]).matrix() for j in range(inst.m)])
    return Policy(A, B)


def prod_policy(inst: Instance) -> Policy:
    """Both sides rank by the mutual preference product."""
    p = inst.joint()
    A = np.stack([ranking_by_score(p[i]).matrix() for i in range(inst.n)])
    B = np.stack([ranking_by_score(p[:, j]).matrix() for j in range(inst.m)])
    return Policy(A, B)


def iter_lp_policy(inst: Instance, K: int | None = None) -> Policy:
    """Fill ranking positions round by round from max-weight matchings.

    Round k matches the two sides on the mutual preference weights, skipping
    pairs already used; matched agents get their partner at position k.
    Agents the matching leaves out fall back to their best not-yet-used
    partner (ties to the smaller index), which also consumes the pair. After
    K rounds each partial ranking is completed in ascending index order,
    restoring a doubly stochastic matrix (positions beyond a truncated
    examination function carry no weight anyway).
    """
    n, m = inst.n, inst.m
    if K is None:
        K = min(n, m)
    if not 1 <= K <= min(n, m):
        raise ValueError(f"K must be in [1, {min(n, m)}]")
    p = inst.joint()
    A = np.zeros((n, m, m))
    B = np.zeros((m, n, n))
    forbidden: set[tuple[int, int]] = set()

    for k in range(K):
        matching = max_weight_matching(p, forbidden)
        matched_left = set()
        matched_right = set()
        for i, j in matching.pairs:
            A[i][j, k] = 1.0
            B[j][i, k] = 1.0
            forbidden.add((i, j))
            matched_left.add(i)
            matched_right.add(j)
        for i in range(n):
            if i in matched_left:
                continue
            j = _best_available(p[i, :], (j for j in range(m) if (i, j) not in forbidden))
            if j is not None:
                A[i][j, k] = 1.0
                forbidden.add((i, j))
        for j in range(m):
            if j in matched_right:
                continue
            i = _best_available(p[:, j], (i for i in range(n) if (i, j) not in forbidden))
            if i is not None:
                B[j][i, k] = 1.0
                forbidden.add((i, j))

    for i in range(n):
        _complete_permutation(A[i])
    for j in range(m):
        _complete_permutation(B[j])
    return Policy(A, B)


def _best_available(scores: np.ndarray, candidates) -> int | None:
    best = None
    best_score = -np.inf
    for c in candidates:
        if scores[c] > best_score:
            best = c
            best_score = scores[c]
    return best


def _complete_permutation(mat: np.ndarray) -> None:
    free_rows = np.nonzero(mat.sum(axis=1) == 0.0)[0]
    free_cols = np.nonzero(mat.sum(axis=0) == 0.0)[0]
    mat[free_rows, free_cols] = 1.0
