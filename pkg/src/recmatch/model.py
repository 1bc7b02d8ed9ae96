"""Two-sided market model: instances, ranking policies, and their evaluation.

Closed-form quantities of the position-based match model live here: match
probabilities, per-agent utilities, total expected matches, log Nash welfare,
cross-utilities under swapped opportunities, envy audits, and the preference
similarity diagnostic.

Everything is a pure function of its arguments (safe to call from any number
of threads); matrices are numpy float64. Left agents are indexed 0..n-1 and
right agents 0..m-1. Ranking positions are 1-based in the math and 0-based in
array storage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exam import ExaminationFunction

LEFT = "left"
RIGHT = "right"

#: Row/column-sum tolerance for doubly stochastic validation. Loose enough to
#: absorb rounding from repeated convex combinations, tight enough to catch
#: real constraint violations.
DS_TOL = 1e-9

#: Most negative entry tolerated as rounding noise.
ENTRY_TOL = -1e-12


class Instance:
    """Market sizes, directed preference matrices, and the examination function.

    p1[i, j] is the probability that left agent i likes right agent j;
    p2[j, i] the probability that right agent j likes left agent i. The joint
    preference p1[i, j] * p2[j, i] is always derived, never stored.
    """

    __slots__ = ("n", "m", "p1", "p2", "exam")

    def __init__(self, p1, p2, exam: ExaminationFunction):
        p1 = np.ascontiguousarray(p1, dtype=np.float64)
        p2 = np.ascontiguousarray(p2, dtype=np.float64)
        if p1.ndim != 2 or p2.ndim != 2:
            raise ValueError("p1 and p2 must be 2-d matrices")
        n, m = p1.shape
        if n < 1 or m < 1:
            raise ValueError("both sides need at least one agent")
        if p2.shape != (m, n):
            raise ValueError(f"p2 must have shape {(m, n)}, got {p2.shape}")
        for name, mat in (("p1", p1), ("p2", p2)):
            if not np.all(np.isfinite(mat)):
                raise ValueError(f"{name} contains non-finite entries")
            if mat.min() < 0.0 or mat.max() > 1.0:
                raise ValueError(f"{name} entries must lie in [0, 1]")
        self.n = n
        self.m = m
        self.p1 = p1
        self.p2 = p2
        self.exam = exam

    def joint(self) -> np.ndarray:
        """Mutual preference p[i, j] = p1[i, j] * p2[j, i], shape (n, m)."""
        return self.p1 * self.p2.T

    def left_position_weights(self) -> np.ndarray:
        """Examination vector over the m positions of a left agent's list."""
        return self.exam.values(self.m)

    def right_position_weights(self) -> np.ndarray:
        """Examination vector over the n positions of a right agent's list."""
        return self.exam.values(self.n)


class Policy:
    """A probabilistic ranking per agent: stacks of doubly stochastic matrices.

    A has shape (n, m, m); A[i][j, k] is the probability right agent j sits at
    rank k+1 of left agent i's list. B has shape (m, n, n), the mirror for
    right agents' lists of left agents.
    """

    __slots__ = ("A", "B", "n", "m")

    def __init__(self, A, B):
        A = np.ascontiguousarray(A, dtype=np.float64)
        B = np.ascontiguousarray(B, dtype=np.float64)
        if A.ndim != 3 or A.shape[1] != A.shape[2]:
            raise ValueError("A must be a stack of square matrices, shape (n, m, m)")
        if B.ndim != 3 or B.shape[1] != B.shape[2]:
            raise ValueError("B must be a stack of square matrices, shape (m, n, n)")
        n, m = A.shape[0], A.shape[1]
        if B.shape != (m, n, n):
            raise ValueError(f"B must have shape {(m, n, n)}, got {B.shape}")
        self.A = A
        self.B = B
        self.n = n
        self.m = m

    def copy(self) -> "Policy":
        return Policy(self.A.copy(), self.B.copy())


def uniform_policy(n: int, m: int) -> Policy:
    """Every agent appears at every position with equal probability."""
    if n < 1 or m < 1:
        raise ValueError("both sides need at least one agent")
    return Policy(np.full((n, m, m), 1.0 / m), np.full((m, n, n), 1.0 / n))


def validate_policy(inst: Instance, pol: Policy, tol: float = DS_TOL) -> list[str]:
    """Check shapes, nonnegativity, and doubly stochastic sums.

    Returns a list of human-readable violations; an empty list means the
    policy is valid for this instance.
    """
    violations: list[str] = []
    if pol.A.shape != (inst.n, inst.m, inst.m):
        violations.append(
            f"A has shape {pol.A.shape}, expected {(inst.n, inst.m, inst.m)}"
        )
    if pol.B.shape != (inst.m, inst.n, inst.n):
        violations.append(
            f"B has shape {pol.B.shape}, expected {(inst.m, inst.n, inst.n)}"
        )
    if violations:
        return violations
    for name, stack in (("A", pol.A), ("B", pol.B)):
        for idx in range(stack.shape[0]):
            mat = stack[idx]
            if mat.min() < ENTRY_TOL:
                j, k = np.unravel_index(int(np.argmin(mat)), mat.shape)
                violations.append(
                    f"{name}[{idx}] entry ({j},{k}) = {mat[j, k]:.3e} is negative"
                )
            row_sums = mat.sum(axis=1)
            col_sums = mat.sum(axis=0)
            for axis, sums in (("row", row_sums), ("column", col_sums)):
                bad = np.nonzero(np.abs(sums - 1.0) > tol)[0]
                for b in bad:
                    violations.append(
                        f"{name}[{idx}] {axis} {int(b)} sums to {sums[b]:.12f}"
                    )
    return violations


def assert_valid_policy(inst: Instance, pol: Policy, tol: float = DS_TOL) -> None:
    violations = validate_policy(inst, pol, tol)
    if violations:
        raise ValueError("invalid policy: " + "; ".join(violations[:5]))


# ---------------------------------------------------------------------------
# Exposure and match probabilities
# ---------------------------------------------------------------------------

def exposure_left(inst: Instance, pol: Policy) -> np.ndarray:
    """eA[i, j]: examination-weighted probability that i's list shows j."""
    return pol.A @ inst.left_position_weights()


def exposure_right(inst: Instance, pol: Policy) -> np.ndarray:
    """eB[j, i]: examination-weighted probability that j's list shows i."""
    return pol.B @ inst.right_position_weights()


def match_probabilities(inst: Instance, pol: Policy) -> np.ndarray:
    """Matrix of pairwise match probabilities, shape (n, m)."""
    return inst.joint() * exposure_left(inst, pol) * exposure_right(inst, pol).T


def match_probability(inst: Instance, pol: Policy, i: int, j: int) -> float:
    """Probability that left agent i and right agent j match."""
    _check_index(i, inst.n, "left")
    _check_index(j, inst.m, "right")
    ea = float(pol.A[i, j] @ inst.left_position_weights())
    eb = float(pol.B[j, i] @ inst.right_position_weights())
    return float(inst.p1[i, j] * inst.p2[j, i]) * ea * eb


def _check_index(idx: int, size: int, side: str) -> None:
    if not 0 <= idx < size:
        raise IndexError(f"{side} index {idx} out of range [0, {size})")


def _check_side(side: str) -> None:
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {side!r}")


# ---------------------------------------------------------------------------
# Utilities, welfare, Nash welfare
# ---------------------------------------------------------------------------

def utilities(inst: Instance, pol: Policy) -> tuple[np.ndarray, np.ndarray]:
    """Per-agent expected match counts: (left vector of n, right vector of m)."""
    probs = match_probabilities(inst, pol)
    return probs.sum(axis=1), probs.sum(axis=0)


def utility(inst: Instance, pol: Policy, side: str, index: int) -> float:
    """Expected number of matches one agent gets under the policy."""
    return cross_utility(inst, pol, side, index, index)


def social_welfare(inst: Instance, pol: Policy) -> float:
    """Expected total number of matches in the market."""
    return float(match_probabilities(inst, pol).sum())


def included_agents(inst: Instance, side: str) -> np.ndarray:
    """Agents whose joint preference vector is not identically zero.

    An excluded agent has utility 0 under every policy, so Nash-welfare
    products skip it (it still counts for welfare and envy audits).
    """
    _check_side(side)
    p = inst.joint()
    if side == LEFT:
        return np.any(p != 0.0, axis=1)
    return np.any(p != 0.0, axis=0)


def log_nsw(inst: Instance, pol: Policy, side: str) -> float:
    """Sum of log-utilities on one side; -inf if an included agent gets 0."""
    _check_side(side)
    left_u, right_u = utilities(inst, pol)
    u = left_u if side == LEFT else right_u
    u = u[included_agents(inst, side)]
    if u.size == 0:
        return 0.0
    if np.any(u <= 0.0):
        return -math.inf
    return float(np.log(u).sum())


# ---------------------------------------------------------------------------
# Opportunities, cross-utilities, envy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpportunityView:
    """Read-only slice of a policy: how one agent shows up in every list of
    the opposite side.

    For left agent i, ``rows[j]`` is the position distribution of i inside
    right agent j's ranking (row i of B[j]); mirrored for right agents.
    """

    side: str
    index: int
    rows: np.ndarray

    @classmethod
    def from_policy(cls, pol: Policy, side: str, index: int) -> "OpportunityView":
        _check_side(side)
        if side == LEFT:
            _check_index(index, pol.n, side)
            rows = pol.B[:, index, :].copy()
        else:
            _check_index(index, pol.m, side)
            rows = pol.A[:, index, :].copy()
        rows.setflags(write=False)
        return cls(side=side, index=index, rows=rows)


def cross_utilities(inst: Instance, pol: Policy, side: str) -> np.ndarray:
    """Matrix of utilities under swapped opportunities.

    Entry (x, y) is the utility agent x of `side` would get if the opposite
    side exposed x the way it currently exposes y, keeping x's own lists.
    The diagonal equals the agents' actual utilities.
    """
    _check_side(side)
    ea = exposure_left(inst, pol)
    eb = exposure_right(inst, pol)
    p = inst.joint()
    if side == LEFT:
        return (p * ea) @ eb
    return (p.T * eb) @ ea


def cross_utility(
    inst: Instance, pol: Policy, side: str, evaluator: int, target: int
) -> float:
    """Utility `evaluator` would get under `target`'s opportunity (same side)."""
    _check_side(side)
    size = inst.n if side == LEFT else inst.m
    _check_index(evaluator, size, side)
    _check_index(target, size, side)
    p = inst.joint()
    if side == LEFT:
        ea_row = pol.A[evaluator] @ inst.left_position_weights()
        eb_col = pol.B[:, target, :] @ inst.right_position_weights()
        return float((p[evaluator] * ea_row) @ eb_col)
    eb_row = pol.B[evaluator] @ inst.right_position_weights()
    ea_col = pol.A[:, target, :] @ inst.left_position_weights()
    return float((p[:, evaluator] * eb_row) @ ea_col)


@dataclass(frozen=True)
class EnvyReport:
    """Counts and worst magnitudes of pairwise opportunity envy per side."""

    left_envy_pairs: int
    right_envy_pairs: int
    max_left_envy: float
    max_right_envy: float
    tau: float

    def to_dict(self) -> dict:
        return {
            "left_envy_pairs": self.left_envy_pairs,
            "right_envy_pairs": self.right_envy_pairs,
            "max_left_envy": self.max_left_envy,
            "max_right_envy": self.max_right_envy,
            "tau": self.tau,
        }


def _side_envy(cross: np.ndarray, tau: float) -> tuple[int, float]:
    own = np.diag(cross).copy()
    gaps = cross - own[:, None]
    np.fill_diagonal(gaps, -np.inf)
    count = int(np.count_nonzero(gaps > tau))
    max_gap = float(gaps.max()) if gaps.size > 1 else -math.inf
    return count, max(0.0, max_gap)


def envy_audit(inst: Instance, pol: Policy, tau: float = 1e-9) -> EnvyReport:
    """Count ordered same-side pairs (x, y) with cross-utility exceeding own
    utility by more than tau; also report the largest positive gap per side.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    left_count, left_max = _side_envy(cross_utilities(inst, pol, LEFT), tau)
    right_count, right_max = _side_envy(cross_utilities(inst, pol, RIGHT), tau)
    return EnvyReport(
        left_envy_pairs=left_count,
        right_envy_pairs=right_count,
        max_left_envy=left_max,
        max_right_envy=right_max,
        tau=tau,
    )


# ---------------------------------------------------------------------------
# Preference similarity diagnostic
# ---------------------------------------------------------------------------

def _nearest_neighbor_bound(rows: np.ndarray, k: int) -> float:
    # Chebyshev distance between joint-preference rows; the k-th nearest
    # other agent, maximized over agents.
    diffs = np.max(np.abs(rows[:, None, :] - rows[None, :, :]), axis=2)
    np.fill_diagonal(diffs, np.inf)
    kth = np.sort(diffs, axis=1)[:, k - 1]
    return float(kth.max())


def epsilon_similarity(inst: Instance, K: int) -> float:
    """Smallest eps such that every agent has K same-side neighbors (plus
    itself) whose joint-preference vectors differ by at most eps entrywise.

    A side with fewer than K+1 agents imposes no constraint and is skipped;
    it is an error if both sides are too small.
    """
    if int(K) != K or K < 1:
        raise ValueError("K must be a positive integer")
    p = inst.joint()
    bounds = []
    if inst.n >= K + 1:
        bounds.append(_nearest_neighbor_bound(p, K))
    if inst.m >= K + 1:
        bounds.append(_nearest_neighbor_bound(p.T, K))
    if not bounds:
        raise ValueError(f"K+1 = {K + 1} exceeds both side sizes ({inst.n}, {inst.m})")
    return max(bounds)
