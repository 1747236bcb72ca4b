import numpy as np
import pytest

from softhappy import Graph, Instance, SbmParams, sample_instance
from softhappy.metrics import CEIL_TOLERANCE


@pytest.fixture
def path3() -> Instance:
    """Path 0-1-2, k=2, v0 precoloured 1, communities (1, 1, 2)."""
    return Instance(Graph(3, [(0, 1), (1, 2)]), 2, {0: 1}, {0: 1, 1: 1, 2: 2})


@pytest.fixture
def star4() -> Instance:
    """Star with centre 0 and leaves 1..3; leaf colours pinned to 1, 1, 2."""
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])
    return Instance(g, 2, {1: 1, 2: 1, 3: 2}, {0: 1, 1: 1, 2: 1, 3: 2})


def random_instance(rng: np.random.Generator, n_max: int = 50) -> Instance:
    """Small random SBM instance for property tests."""
    n = int(rng.integers(6, n_max + 1))
    k = int(rng.integers(2, min(5, n // 2) + 1))
    p = float(0.3 + 0.7 * rng.random())
    q = float(p / 2 * (0.2 + 0.8 * rng.random()))
    pcc = int(rng.integers(1, min(3, n // k) + 1))
    seed = int(rng.integers(2**32))
    return sample_instance(SbmParams(n=n, k=k, p=p, q=q, pcc=pcc, seed=seed))


def brute_force_happy(inst: Instance, colours: np.ndarray, rho: float) -> int:
    """Naive per-vertex reference evaluator, independent of the vectorized
    counting path."""
    happy = 0
    for v in range(inst.n):
        neigh = inst.graph.neighbours(v)
        same = sum(1 for u in neigh if colours[u] == colours[v])
        need = int(np.ceil(rho * len(neigh) - CEIL_TOLERANCE))
        if same >= max(need, 0):
            happy += 1
    return happy
