"""Sampling partially coloured graphs from a simplified stochastic block
model G(n, k, p, q): k near-equal communities, intra-community edge
probability p, inter-community probability q.

Precolouring protocol: from each community, ``pcc`` vertices chosen
uniformly without replacement receive their community id as colour.

The evolutionary engines expect connected inputs, but SBM draws can be
disconnected (mostly at tiny q). Sampling retries a fresh draw up to
``RESAMPLE_LIMIT`` times and then falls back to stitching the remaining
components together with uniformly random inter-component edges; the
number of stitched edges is recorded in the instance metadata.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ConfigError, ParameterError
from .graph import Graph
from .instance import GenParams, Instance
from .rng import STREAM_BATCH, derive_rng, uniform_open_closed

RESAMPLE_LIMIT = 50


@dataclass(frozen=True)
class SbmParams:
    n: int
    k: int
    p: float
    q: float
    pcc: int
    seed: int

    def __post_init__(self):
        if self.k < 2:
            raise ParameterError(f"k must be >= 2, got {self.k}")
        if self.k > self.n:
            raise ParameterError(f"k={self.k} exceeds n={self.n}")
        if not 0.0 < self.q <= self.p / 2 <= self.p <= 1.0:
            raise ParameterError(
                f"need 0 < q <= p/2 and p <= 1, got p={self.p}, q={self.q}"
            )
        if not 1 <= self.pcc <= 10:
            raise ParameterError(f"pcc must lie in 1..10, got {self.pcc}")
        if self.pcc > self.n // self.k:
            raise ParameterError(
                f"pcc={self.pcc} exceeds community size floor {self.n // self.k}"
            )


def community_sizes(n: int, k: int) -> list[int]:
    """Near-equal split; the first n mod k communities get the extra vertex."""
    base = n // k
    return [base + (1 if i < n % k else 0) for i in range(k)]


def _sample_edges(rng: np.random.Generator, offsets, sizes, p: float, q: float):
    """Bernoulli-sample all vertex pairs block by block (fixed draw order)."""
    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    k = len(sizes)
    for a in range(k):
        sa, oa = sizes[a], offsets[a]
        if sa >= 2:
            iu, iv = np.triu_indices(sa, 1)
            mask = rng.random(iu.size) < p
            us.append(iu[mask] + oa)
            vs.append(iv[mask] + oa)
        for b in range(a + 1, k):
            sb, ob = sizes[b], offsets[b]
            mask = rng.random(sa * sb) < q
            hit = np.flatnonzero(mask)
            us.append(hit // sb + oa)
            vs.append(hit % sb + ob)
    u = np.concatenate(us) if us else np.zeros(0, dtype=np.int64)
    v = np.concatenate(vs) if vs else np.zeros(0, dtype=np.int64)
    return u, v


def _component_labels(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    data = np.ones(u.size, dtype=np.int8)
    adj = csr_matrix((data, (u, v)), shape=(n, n))
    _, labels = connected_components(adj, directed=False)
    return labels


def _stitch_components(rng, labels: np.ndarray):
    """Connect remaining components, one uniformly random inter-component
    vertex pair per missing link. Uniformity over pairs: pick the
    component pair with probability proportional to |A|*|B|, then a
    uniform vertex in each."""
    labels = labels.copy()
    extra_u, extra_v = [], []
    while True:
        comp_ids, counts = np.unique(labels, return_counts=True)
        if comp_ids.size <= 1:
            break
        weights = np.outer(counts, counts).astype(float)
        np.fill_diagonal(weights, 0.0)
        flat = weights.ravel() / weights.sum()
        pick = rng.choice(flat.size, p=flat)
        ca, cb = divmod(pick, comp_ids.size)
        members_a = np.flatnonzero(labels == comp_ids[ca])
        members_b = np.flatnonzero(labels == comp_ids[cb])
        u = int(members_a[rng.integers(members_a.size)])
        v = int(members_b[rng.integers(members_b.size)])
        extra_u.append(u)
        extra_v.append(v)
        labels[labels == comp_ids[cb]] = comp_ids[ca]
    return extra_u, extra_v


def sample_instance(params: SbmParams) -> Instance:
    """Draw one instance; deterministic for a given params.seed."""
    rng = derive_rng(params.seed)
    n, k = params.n, params.k
    sizes = community_sizes(n, k)
    offsets = np.concatenate([[0], np.cumsum(sizes)])[:-1]
    community = np.repeat(np.arange(1, k + 1), sizes)

    extra = 0
    for _ in range(RESAMPLE_LIMIT):
        u, v = _sample_edges(rng, offsets, sizes, params.p, params.q)
        labels = _component_labels(n, u, v)
        if labels.max(initial=0) == 0:
            break
    else:
        eu, ev = _stitch_components(rng, labels)
        u = np.concatenate([u, np.asarray(eu, dtype=np.int64)])
        v = np.concatenate([v, np.asarray(ev, dtype=np.int64)])
        extra = len(eu)

    graph = Graph(n, np.column_stack([u, v]))

    precolour: dict[int, int] = {}
    for c in range(k):
        members = np.arange(offsets[c], offsets[c] + sizes[c])
        chosen = rng.choice(members, size=params.pcc, replace=False)
        for vert in chosen:
            precolour[int(vert)] = c + 1

    rho_suggested = float(uniform_open_closed(rng))
    gen = GenParams(
        p=params.p,
        q=params.q,
        pcc=params.pcc,
        seed=params.seed,
        rho_suggested=rho_suggested,
        extra_edges=extra,
    )
    return Instance(graph, k, precolour, community, gen)


@dataclass(frozen=True)
class BatchRanges:
    """Inclusive parameter ranges for batch sampling. p is drawn uniformly
    from (p[0], p[1]] and q uniformly from (0, p/2], matching the instance
    protocol; integer ranges are sampled uniformly."""

    n: tuple[int, int] = (200, 600)
    k: tuple[int, int] = (2, 20)
    pcc: tuple[int, int] = (1, 10)
    p: tuple[float, float] = (0.0, 1.0)

    def validate(self) -> None:
        for name in ("n", "k", "pcc"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"empty {name} range ({lo}, {hi})")
        if self.n[0] < 2:
            raise ConfigError("n range must start at 2 or more")
        if self.k[0] < 2:
            raise ConfigError("k range must start at 2 or more")
        if self.k[0] > self.n[0]:
            raise ConfigError(f"k lower bound {self.k[0]} exceeds smallest n {self.n[0]}")
        if self.pcc[0] < 1:
            raise ConfigError("pcc range must start at 1 or more")
        if self.pcc[0] > self.n[0] // self.k[0]:
            raise ConfigError(
                f"pcc lower bound {self.pcc[0]} can exceed the community size floor"
            )
        if not (0.0 <= self.p[0] < self.p[1] <= 1.0):
            raise ConfigError(f"p range must satisfy 0 <= lo < hi <= 1, got {self.p}")


def sample_batch(
    ranges: BatchRanges, count: int, seed: int, per_n: int | None = None
) -> list[Instance]:
    """Sample ``count`` instances with parameters drawn uniformly from the
    ranges. With ``per_n`` set, n walks the range in blocks of per_n
    instances instead of being drawn at random (the "so many instances per
    n" campaign layout)."""
    ranges.validate()
    if count < 0:
        raise ConfigError(f"count must be >= 0, got {count}")
    instances = []
    n_lo, n_hi = ranges.n
    for i in range(count):
        rng = derive_rng(seed, STREAM_BATCH, i)
        if per_n:
            n = n_lo + (i // per_n) % (n_hi - n_lo + 1)
        else:
            n = int(rng.integers(n_lo, n_hi + 1))
        k_hi = min(ranges.k[1], n)
        if ranges.k[0] > k_hi:
            raise ConfigError(f"k range empty for n={n}")
        k = int(rng.integers(ranges.k[0], k_hi + 1))
        p_lo, p_hi = ranges.p
        p = p_lo + (p_hi - p_lo) * float(uniform_open_closed(rng))
        q = (p / 2) * float(uniform_open_closed(rng))
        pcc_hi = min(ranges.pcc[1], n // k)
        if ranges.pcc[0] > pcc_hi:
            raise ConfigError(f"pcc range empty for n={n}, k={k}")
        pcc = int(rng.integers(ranges.pcc[0], pcc_hi + 1))
        inst_seed = int(rng.integers(2**63))
        instances.append(
            sample_instance(SbmParams(n=n, k=k, p=p, q=q, pcc=pcc, seed=inst_seed))
        )
    return instances
