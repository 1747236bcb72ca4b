"""Immutable undirected simple graph with array-backed adjacency."""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import ValidationError


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Edges are kept as a canonical (m, 2) array with u < v, sorted
    lexicographically; adjacency is stored in CSR form (``indptr``,
    ``indices``) so the hot evaluation loops can slice neighbour lists
    without per-call list building. Instances are immutable after
    construction and safe to share across workers.
    """

    __slots__ = ("n", "edge_array", "indptr", "indices")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] | np.ndarray):
        if n < 0:
            raise ValidationError("vertex-range", f"vertex count {n} is negative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValidationError("vertex-range", "edges must be pairs")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edge_array", _canonical_edges(n, arr))
        indptr, indices = _build_csr(self.n, self.edge_array)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __getstate__(self):
        return {name: getattr(self, name) for name in self.__slots__}

    def __setstate__(self, state):
        for name, value in state.items():
            object.__setattr__(self, name, value)

    @property
    def m(self) -> int:
        return int(self.edge_array.shape[0])

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edge list as (u, v) tuples with u < v, sorted."""
        return [tuple(e) for e in self.edge_array.tolist()]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbours(self, v: int) -> np.ndarray:
        """Neighbour ids of v, in a stable construction-defined order."""
        self._check_vertex(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} outside 0..{self.n - 1}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edge_array, other.edge_array)

    def __hash__(self) -> int:
        return hash((self.n, self.edge_array.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _canonical_edges(n: int, arr: np.ndarray) -> np.ndarray:
    if arr.shape[0]:
        if arr.min() < 0 or arr.max() >= n:
            bad = arr[(arr.min(axis=1) < 0) | (arr.max(axis=1) >= n)][0]
            raise ValidationError(
                "vertex-range", f"edge ({bad[0]}, {bad[1]}) outside 0..{n - 1}"
            )
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            raise ValidationError(
                "self-loop", f"self-loop at vertex {int(arr[loops][0, 0])}"
            )
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    order = np.lexsort((hi, lo))
    canon = np.column_stack([lo[order], hi[order]])
    if canon.shape[0] > 1:
        dup = np.flatnonzero((np.diff(canon[:, 0]) == 0) & (np.diff(canon[:, 1]) == 0))
        if dup.size:
            u, v = canon[dup[0]]
            raise ValidationError("duplicate-edge", f"edge ({u}, {v}) listed twice")
    canon.setflags(write=False)
    return canon


def _build_csr(n: int, edge_array: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    endpoints = np.concatenate([edge_array[:, 0], edge_array[:, 1]])
    others = np.concatenate([edge_array[:, 1], edge_array[:, 0]])
    order = np.argsort(endpoints, kind="stable")
    indices = others[order]
    counts = np.bincount(endpoints, minlength=n)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    indices.setflags(write=False)
    indptr.setflags(write=False)
    return indptr, indices
