import numpy as np
import pytest

from recmatch import ExaminationFunction, Instance, Policy


def example1_instance(eps: float) -> Instance:
    """Two left agents courting one right agent; the right agent likes the
    first slightly more (by eps)."""
    return Instance([[1.0], [1.0]], [[1.0, 1.0 - eps]], ExaminationFunction("inverse"))


def example1_sorted_policy() -> Policy:
    """The welfare-optimal deterministic policy of that market."""
    return Policy(np.ones((2, 1, 1)), np.array([[[1.0, 0.0], [0.0, 1.0]]]))


def example1_uniform_policy() -> Policy:
    return Policy(np.ones((2, 1, 1)), np.full((1, 2, 2), 0.5))


def random_instance(rng, n, m, kind="inverse", K=None) -> Instance:
    return Instance(
        rng.random((n, m)), rng.random((m, n)), ExaminationFunction(kind, K=K)
    )


def random_doubly_stochastic(rng, d, mixes=4) -> np.ndarray:
    """Random interior point of the Birkhoff polytope: a convex combination
    of random permutation matrices plus a dash of uniform."""
    weights = rng.dirichlet(np.ones(mixes + 1))
    out = weights[0] * np.full((d, d), 1.0 / d)
    for w in weights[1:]:
        perm = rng.permutation(d)
        mat = np.zeros((d, d))
        mat[np.arange(d), perm] = 1.0
        out += w * mat
    return out


def random_policy(rng, n, m) -> Policy:
    A = np.stack([random_doubly_stochastic(rng, m) for _ in range(n)])
    B = np.stack([random_doubly_stochastic(rng, n) for _ in range(m)])
    return Policy(A, B)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
