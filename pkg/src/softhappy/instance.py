"""Partially coloured graph instances.

An Instance bundles a graph with the colour count k, the fixed partial
colouring (the precoloured set), and optional ground-truth community
labels. Generated instances always carry communities and follow the
convention that a precoloured vertex's colour equals its community id,
which anchors the colour<->community correspondence used by detection
accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ValidationError
from .graph import Graph

# Colourings are plain integer arrays of length n with values in 1..k.
Colouring = np.ndarray


@dataclass(frozen=True)
class GenParams:
    """Generator metadata carried along with a sampled instance."""

    p: float
    q: float
    pcc: int
    seed: int
    rho_suggested: float | None = None
    extra_edges: int = 0


class Instance:
    """Immutable problem instance: graph + k + precolouring (+ communities)."""

    __slots__ = ("graph", "k", "precolour", "community", "params")

    def __init__(
        self,
        graph: Graph,
        k: int,
        precolour: Mapping[int, int],
        community: Mapping[int, int] | np.ndarray | None = None,
        params: GenParams | None = None,
    ):
        if k < 2:
            raise ValidationError("colour-range", f"k must be >= 2, got {k}")
        n = graph.n

        pre = np.zeros(n, dtype=np.int64)  # 0 = free
        for v, c in dict(precolour).items():
            v = int(v)
            c = int(c)
            if not 0 <= v < n:
                raise ValidationError("vertex-range", f"precoloured vertex {v} outside 0..{n - 1}")
            if not 1 <= c <= k:
                raise ValidationError("colour-range", f"colour {c} of vertex {v} outside 1..{k}")
            pre[v] = c

        comm = None
        if community is not None:
            if isinstance(community, np.ndarray):
                comm = community.astype(np.int64, copy=True)
                if comm.shape != (n,):
                    raise ValidationError("community-partial", "community array must cover every vertex")
            else:
                comm = np.zeros(n, dtype=np.int64)
                for v, g in dict(community).items():
                    v = int(v)
                    if not 0 <= v < n:
                        raise ValidationError("vertex-range", f"community vertex {v} outside 0..{n - 1}")
                    comm[v] = int(g)
            missing = np.flatnonzero(comm == 0)
            if missing.size:
                raise ValidationError(
                    "community-partial", f"vertex {missing[0]} has no community label"
                )
            bad = np.flatnonzero((comm < 1) | (comm > k))
            if bad.size:
                raise ValidationError(
                    "community-range",
                    f"community id {comm[bad[0]]} of vertex {bad[0]} outside 1..{k}",
                )

        if comm is not None:
            coloured = np.flatnonzero(pre)
            mismatch = coloured[pre[coloured] != comm[coloured]]
            if mismatch.size:
                v = int(mismatch[0])
                # Distinguish two vertices of one community disagreeing from a
                # lone precoloured vertex off its community id.
                seen: dict[int, int] = {}
                for u in coloured:
                    g = int(comm[u])
                    if g in seen and pre[seen[g]] != pre[u]:
                        raise ValidationError(
                            "precolour-conflict",
                            f"community {g}: vertices {seen[g]} and {int(u)} precoloured "
                            f"{int(pre[seen[g]])} vs {int(pre[u])}",
                        )
                    seen.setdefault(g, int(u))
                raise ValidationError(
                    "precolour-mismatch",
                    f"vertex {v} precoloured {int(pre[v])} but lies in community {int(comm[v])}",
                )

        pre.setflags(write=False)
        if comm is not None:
            comm.setflags(write=False)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "precolour", pre)
        object.__setattr__(self, "community", comm)
        object.__setattr__(self, "params", params)

    # __slots__ on a non-dataclass: block accidental mutation explicitly.
    def __setattr__(self, name, value):
        raise AttributeError("Instance is immutable")

    # Custom __setattr__ breaks pickle's default slot restore; campaign
    # workers receive instances by pickle, so restore around it.
    def __getstate__(self):
        return {name: getattr(self, name) for name in self.__slots__}

    def __setstate__(self, state):
        for name, value in state.items():
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def precoloured_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.precolour)

    @property
    def free_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.precolour == 0)

    @property
    def n_free(self) -> int:
        return int(np.count_nonzero(self.precolour == 0))

    def precolour_map(self) -> dict[int, int]:
        return {int(v): int(self.precolour[v]) for v in self.precoloured_vertices}

    def community_map(self) -> dict[int, int] | None:
        if self.community is None:
            return None
        return {v: int(g) for v, g in enumerate(self.community)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        if self.graph != other.graph or self.k != other.k:
            return False
        if not np.array_equal(self.precolour, other.precolour):
            return False
        if (self.community is None) != (other.community is None):
            return False
        if self.community is not None and not np.array_equal(self.community, other.community):
            return False
        return self.params == other.params

    def __repr__(self) -> str:
        return (
            f"Instance(n={self.n}, m={self.graph.m}, k={self.k}, "
            f"precoloured={len(self.precoloured_vertices)})"
        )


def validate_colouring(inst: Instance, colours: np.ndarray) -> np.ndarray:
    """Check a colouring is total, in range, and extends the precolouring."""
    colours = np.asarray(colours, dtype=np.int64)
    if colours.shape != (inst.n,):
        raise ValidationError("colouring-partial", f"expected {inst.n} colours, got shape {colours.shape}")
    bad = np.flatnonzero((colours < 1) | (colours > inst.k))
    if bad.size:
        raise ValidationError(
            "colour-range", f"vertex {int(bad[0])} has colour {int(colours[bad[0]])} outside 1..{inst.k}"
        )
    fixed = inst.precoloured_vertices
    broken = fixed[colours[fixed] != inst.precolour[fixed]]
    if broken.size:
        v = int(broken[0])
        raise ValidationError(
            "colouring-precolour",
            f"vertex {v} coloured {int(colours[v])} but precoloured {int(inst.precolour[v])}",
        )
    return colours
