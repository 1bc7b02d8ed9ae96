"""Exact linear oracles over rankings: best permutation for a weight matrix
and max-weight bipartite matching with forbidden pairs.

Both oracles are exact and fully deterministic. Ties are resolved through the
optimal dual potentials returned by the kernel: the edges that are tight under
the potentials span every optimal solution, and a lexicographic sweep inside
that tight subgraph picks the canonical optimum (no perturbation of the
weights, so the resolution is exact for exactly-tied inputs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend

#: Relative slack when deciding whether an edge is tight under the duals.
TIGHT_TOL = 1e-9


@dataclass(frozen=True)
class PermutationMatrix:
    """A vertex of the doubly stochastic polytope.

    Row r is assigned column ``col_of_row[r]``; materializing gives a 0/1
    matrix with exactly one 1 per row and column.
    """

    col_of_row: tuple[int, ...]

    def __post_init__(self):
        d = len(self.col_of_row)
        if sorted(self.col_of_row) != list(range(d)):
            raise ValueError("assignment is not a bijection")

    @property
    def size(self) -> int:
        return len(self.col_of_row)

    def matrix(self) -> np.ndarray:
        d = self.size
        out = np.zeros((d, d))
        out[np.arange(d), list(self.col_of_row)] = 1.0
        return out

    def total_weight(self, weights: np.ndarray) -> float:
        return float(weights[np.arange(self.size), list(self.col_of_row)].sum())


@dataclass(frozen=True)
class PartialMatching:
    """Disjoint (left, right) pairs plus their total weight."""

    pairs: tuple[tuple[int, int], ...]
    weight: float

    def pair_set(self) -> set[tuple[int, int]]:
        return set(self.pairs)


def _lex_min_tight_matching(tight: np.ndarray, col_of_row: np.ndarray) -> np.ndarray:
    """Lexicographically smallest perfect matching inside a tight subgraph.

    Starting from a known perfect matching, sweep rows in order and swap each
    row to its smallest usable column, repairing the rest of the matching via
    an alternating path that never displaces already-fixed rows. Smallest is
    judged by the assignment vector (col of row 0, col of row 1, ...).

    Rows with a single tight edge have no freedom and cannot sit on an
    alternating path either (displacing their column strands them), so they
    are fixed upfront; only the ambiguous core is swept.
    """
    d = tight.shape[0]
    m_rc = [int(c) for c in col_of_row]
    m_cr = [0] * d
    for r, c in enumerate(m_rc):
        m_cr[c] = r
    edge_rows, edge_cols = np.nonzero(tight)
    row_adj: list[list[int]] = [[] for _ in range(d)]
    col_adj: list[list[int]] = [[] for _ in range(d)]
    for r, c in zip(edge_rows.tolist(), edge_cols.tolist()):
        row_adj[r].append(c)
        col_adj[c].append(r)

    fixed = _peel_forced(row_adj, col_adj, m_rc, m_cr)
    if all(fixed):
        # Unique perfect matching; nothing to tie-break. This is the common
        # case: dual degeneracy often marks edges tight without creating any
        # alternative optimum, and the peel disposes of those in O(edges).
        return np.asarray(m_rc, dtype=np.int64)

    for r in range(d):
        if fixed[r]:
            continue
        fixed[r] = True
        for c in row_adj[r]:
            if c == m_rc[r]:
                break
            r2 = m_cr[c]
            if fixed[r2]:
                continue
            freed = m_rc[r]
            # Tentatively hand column c to row r and reroute its old owner.
            m_rc[r] = c
            m_cr[c] = r
            m_rc[r2] = -1
            m_cr[freed] = -1
            if _augment(row_adj, m_rc, m_cr, fixed, r2):
                break
            m_rc[r] = freed
            m_cr[freed] = r
            m_rc[r2] = c
            m_cr[c] = r2
    return np.asarray(m_rc, dtype=np.int64)


def _peel_forced(row_adj, col_adj, m_rc, m_cr) -> list[bool]:
    """Fix every matched pair forced into all perfect matchings.

    Iterated degree-1 elimination: a row (or column) with a single live edge
    must use it, and that edge is necessarily the known matching's edge.
    A bipartite graph has a unique perfect matching exactly when this peel
    consumes it entirely; whatever survives has genuine alternatives.
    """
    d = len(m_rc)
    row_deg = [len(a) for a in row_adj]
    col_deg = [len(a) for a in col_adj]
    fixed = [False] * d
    col_dead = [False] * d
    rows = [r for r in range(d) if row_deg[r] == 1]
    cols = [c for c in range(d) if col_deg[c] == 1]
    while rows or cols:
        if rows:
            r = rows.pop()
            if fixed[r]:
                continue
            c = m_rc[r]
        else:
            c = cols.pop()
            if col_dead[c]:
                continue
            r = m_cr[c]
            if fixed[r]:
                continue
        fixed[r] = True
        col_dead[c] = True
        for c2 in row_adj[r]:
            if not col_dead[c2]:
                col_deg[c2] -= 1
                if col_deg[c2] == 1:
                    cols.append(c2)
        for r2 in col_adj[c]:
            if not fixed[r2]:
                row_deg[r2] -= 1
                if row_deg[r2] == 1:
                    rows.append(r2)
    return fixed


def _augment(row_adj, m_rc, m_cr, blocked, root) -> bool:
    """Kuhn-style alternating search rematching `root`, avoiding blocked rows.

    Iterative DFS: each stack frame is (row, scan position, column that the
    frame below is waiting to take from this row).
    """
    visited = [False] * len(m_cr)
    stack = [(root, 0, -1)]
    while stack:
        row, ptr, pending = stack.pop()
        alist = row_adj[row]
        descended = False
        while ptr < len(alist):
            c = alist[ptr]
            ptr += 1
            if visited[c]:
                continue
            visited[c] = True
            owner = m_cr[c]
            if owner < 0:
                m_rc[row] = c
                m_cr[c] = row
                col = pending
                while stack:
                    prow, _, ppending = stack.pop()
                    m_rc[prow] = col
                    m_cr[col] = prow
                    col = ppending
                return True
            if blocked[owner]:
                continue
            stack.append((row, ptr, pending))
            stack.append((owner, 0, c))
            descended = True
            break
        if descended:
            continue
    return False


def _tight_graph(cost, u, v, col_of_row, allowed=None) -> np.ndarray:
    scale = max(1.0, float(np.abs(cost).max()))
    tight = (cost - u[:, None] - v[None, :]) <= TIGHT_TOL * scale
    if allowed is not None:
        tight &= allowed
    # The solved matching is optimal by construction; force its edges in so
    # rounding in the duals can never disconnect it.
    tight[np.arange(cost.shape[0]), col_of_row] = True
    return tight


def assignment_columns(W: np.ndarray) -> np.ndarray:
    """Tie-broken maximizing assignment of a finite square weight matrix.

    Internal fast path (no input validation or -inf handling): returns the
    column of each row for the lexicographically smallest among the
    maximum-weight permutations.
    """
    d = W.shape[0]
    cost = -W
    col_of_row, _, u, v = backend.solve_square_min(cost)
    tight = _tight_graph(cost, u, v, col_of_row)
    if int(tight.sum()) == d:
        return col_of_row
    return _lex_min_tight_matching(tight, col_of_row)


def max_weight_permutation(W) -> PermutationMatrix:
    """Permutation maximizing the sum of picked entries of a square matrix.

    ``-inf`` entries are allowed and mean "never pick unless forced" (a row
    of all ``-inf`` still receives some column). Ties are broken toward the
    lexicographically smallest assignment vector.
    """
    W = np.ascontiguousarray(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("weight matrix must be square")
    if W.size == 0:
        raise ValueError("weight matrix must be nonempty")
    if np.any(np.isnan(W)) or np.any(np.isposinf(W)):
        raise ValueError("weights must not contain NaN or +inf")
    d = W.shape[0]
    finite = np.isfinite(W)
    if not finite.all():
        mx = max(1.0, float(np.abs(W[finite]).max()) if finite.any() else 0.0)
        W = np.where(finite, W, -(2.0 * d * mx + 1.0))
    best = assignment_columns(W)
    return PermutationMatrix(tuple(int(c) for c in best))


def max_weight_matching(W, forbidden=()) -> PartialMatching:
    """Max-weight bipartite matching; vertices may stay unmatched.

    Weights of allowed pairs must be nonnegative. Among weight maximizers the
    oracle prefers larger cardinality, then the lexicographically smallest
    pair set. Implemented by padding to a square assignment with one zero-
    weight dummy column per left vertex and dummy row per right vertex, then
    resolving ties in two exact stages over tight subgraphs (cardinality,
    then lexicographic sweep).
    """
    W = np.ascontiguousarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise ValueError("weight matrix must be 2-d")
    n, m = W.shape
    forbidden = set((int(i), int(j)) for i, j in forbidden)
    for i, j in forbidden:
        if not (0 <= i < n and 0 <= j < m):
            raise ValueError(f"forbidden pair ({i}, {j}) out of range")
    allowed_real = np.ones((n, m), dtype=bool)
    if forbidden:
        rows, cols = zip(*forbidden)
        allowed_real[list(rows), list(cols)] = False
    if not np.all(np.isfinite(W[allowed_real])):
        raise ValueError("allowed weights must be finite")
    if allowed_real.any() and W[allowed_real].min() < 0.0:
        raise ValueError("allowed weights must be nonnegative")

    d = n + m
    mx = max(1.0, float(np.abs(W[allowed_real]).max()) if allowed_real.any() else 0.0)
    sentinel = -(2.0 * d * mx + 1.0)

    padded = np.full((d, d), sentinel)
    allowed = np.zeros((d, d), dtype=bool)
    padded[:n, :m] = np.where(allowed_real, W, sentinel)
    allowed[:n, :m] = allowed_real
    li = np.arange(n)
    ri = np.arange(m)
    padded[li, m + li] = 0.0      # left vertex i may stay unmatched
    allowed[li, m + li] = True
    padded[n + ri, ri] = 0.0      # right vertex j may stay unmatched
    allowed[n + ri, ri] = True
    padded[n:, m:] = 0.0          # spare dummies absorb each other
    allowed[n:, m:] = True

    # Stage 1: maximize total weight.
    cost = -padded
    col_of_row, _, u, v = backend.solve_square_min(cost)
    tight = _tight_graph(cost, u, v, col_of_row, allowed)

    # Stage 2: among weight maximizers, maximize the number of real pairs.
    # Real tight edges score 1, dummy tight edges 0; exact integer weights.
    real = np.zeros((d, d), dtype=bool)
    real[:n, :m] = True
    card = np.where(tight, np.where(real, 1.0, 0.0), -(2.0 * d + 1.0))
    cost2 = -card
    col_of_row2, _, u2, v2 = backend.solve_square_min(cost2)
    tight2 = _tight_graph(cost2, u2, v2, col_of_row2, tight)

    # Stage 3: lexicographically smallest pair set.
    best = _lex_min_tight_matching(tight2, col_of_row2)
    pairs = tuple(
        (int(r), int(best[r])) for r in range(n) if best[r] < m
    )
    weight = float(sum(W[i, j] for i, j in pairs))
    return PartialMatching(pairs=pairs, weight=weight)
