"""Construction and improvement heuristics.

* random completion: free vertices get independent uniform colours.
* local maximal colouring (lmc): grow outward from the precoloured set,
  giving each frontier vertex the colour most frequent among its already
  coloured neighbours.
* local search (ls): one pass over the rho-unhappy free vertices, moving
  each to its neighbourhood majority colour.
* repeated local search (rls): ls passes with the unhappy set refilled
  between passes, until it empties, a pass changes nothing, or the pass
  budget runs out.

All heuristics are deterministic given their seed, preserve the
precolouring, and touch each neighbour list a bounded number of times
(linear in the edge count per pass).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .instance import Colouring, Instance
from .metrics import Evaluator
from .rng import as_generator

logger = logging.getLogger(__name__)

DEFAULT_RLS_BUDGET = 50


@dataclass
class HeuristicStats:
    """Operation counters for the linear-time contracts."""

    neighbour_inspections: int = 0
    passes: int = 0
    recoloured: int = 0
    fallback_coloured: int = 0
    initial_unhappy: list[int] = field(default_factory=list)


def random_completion(inst: Instance, seed) -> Colouring:
    """Keep the precolouring, draw every free vertex uniformly from 1..k."""
    rng = as_generator(seed)
    colours = inst.precolour.copy()
    free = inst.free_vertices
    colours[free] = rng.integers(1, inst.k + 1, size=free.size)
    return colours


def _majority_colour(counts: np.ndarray, rng: np.random.Generator) -> int:
    """Most frequent colour in a bincount over 0..k; index 0 (uncoloured)
    never participates. Ties are broken uniformly at random.

    k is small, so plain Python over the count list beats numpy here.
    """
    cl = counts.tolist()
    cl[0] = 0
    mx = max(cl)
    tied = [c for c, cnt in enumerate(cl) if cnt == mx]
    return tied[int(rng.random() * len(tied))]


def lmc(inst: Instance, seed, stats: HeuristicStats | None = None) -> Colouring:
    """Local maximal colouring.

    Maintains the frontier of uncoloured vertices adjacent to a coloured
    one; repeatedly picks a frontier vertex uniformly at random and gives
    it the majority colour of its coloured neighbours. Components without
    any precoloured vertex never enter the frontier; their vertices fall
    back to uniform random colours (with a logged warning).
    """
    rng = as_generator(seed)
    g = inst.graph
    indptr, indices = g.indptr, g.indices
    colours = inst.precolour.copy()
    k = inst.k

    # Array-backed set: O(1) uniform pick and removal by swap-with-last.
    slot = np.full(g.n, -1, dtype=np.int64)
    frontier: list[int] = []

    def enqueue(cands: np.ndarray) -> None:
        fresh = cands[(colours[cands] == 0) & (slot[cands] < 0)]
        if fresh.size:
            slot[fresh] = np.arange(len(frontier), len(frontier) + fresh.size)
            frontier.extend(fresh.tolist())

    inspections = 0
    for v in inst.precoloured_vertices:
        neigh = indices[indptr[v] : indptr[v + 1]]
        inspections += neigh.size
        enqueue(neigh)

    while frontier:
        i = int(rng.integers(len(frontier)))
        v = frontier[i]
        last = frontier.pop()
        if last != v:
            frontier[i] = last
            slot[last] = i
        slot[v] = -1

        neigh = indices[indptr[v] : indptr[v + 1]]
        inspections += 2 * neigh.size  # one scan to count, one to grow
        counts = np.bincount(colours[neigh], minlength=k + 1)
        colours[v] = _majority_colour(counts, rng)
        enqueue(neigh)

    uncoloured = np.flatnonzero(colours == 0)
    if uncoloured.size:
        logger.warning(
            "lmc: %d vertices lie in components without a precoloured vertex; "
            "assigning uniform random colours",
            uncoloured.size,
        )
        colours[uncoloured] = rng.integers(1, k + 1, size=uncoloured.size)

    if stats is not None:
        stats.neighbour_inspections += inspections
        stats.fallback_coloured += int(uncoloured.size)
    return colours


def _ls_pass(
    colours: Colouring,
    ev: Evaluator,
    free_mask: np.ndarray,
    rng: np.random.Generator,
    stats: HeuristicStats | None = None,
) -> tuple[int, int]:
    """One in-place local-search pass; returns (visited, recoloured).

    The unhappy set is gathered once at pass entry. Each member is visited
    exactly once in a random order; the majority colour is recomputed
    against the evolving colouring at visit time, so earlier moves within
    the pass influence later ones.
    """
    unhappy_free = np.flatnonzero(~ev.happy_mask(colours) & free_mask)
    if stats is not None:
        stats.neighbour_inspections += int(ev.inst.graph.indices.size)
        stats.initial_unhappy.append(int(unhappy_free.size))
    if unhappy_free.size == 0:
        return 0, 0

    indptr = ev.inst.graph.indptr
    indices = ev.inst.graph.indices
    k = ev.inst.k
    changed = 0
    inspections = 0
    for v in rng.permutation(unhappy_free):
        neigh = indices[indptr[v] : indptr[v + 1]]
        inspections += neigh.size
        counts = np.bincount(colours[neigh], minlength=k + 1)
        c = _majority_colour(counts, rng)
        if colours[v] != c:
            colours[v] = c
            changed += 1
    if stats is not None:
        stats.neighbour_inspections += inspections
        stats.recoloured += changed
    return int(unhappy_free.size), changed


def ls(
    inst: Instance,
    sigma: Colouring,
    rho: float,
    seed,
    stats: HeuristicStats | None = None,
    evaluator: Evaluator | None = None,
) -> Colouring:
    """Single local-search pass over a copy of ``sigma``."""
    rng = as_generator(seed)
    ev = evaluator if evaluator is not None else Evaluator(inst, rho)
    colours = np.array(sigma, dtype=np.int64, copy=True)
    _ls_pass(colours, ev, inst.precolour == 0, rng, stats)
    if stats is not None:
        stats.passes += 1
    return colours


def rls(
    inst: Instance,
    sigma: Colouring,
    rho: float,
    seed,
    budget: int = DEFAULT_RLS_BUDGET,
    stats: HeuristicStats | None = None,
    evaluator: Evaluator | None = None,
) -> Colouring:
    """Repeated local search: rerun the pass with a refilled unhappy set
    until it empties, a pass is a no-op, or ``budget`` passes ran."""
    rng = as_generator(seed)
    ev = evaluator if evaluator is not None else Evaluator(inst, rho)
    colours = np.array(sigma, dtype=np.int64, copy=True)
    free_mask = inst.precolour == 0
    for _ in range(budget):
        visited, changed = _ls_pass(colours, ev, free_mask, rng, stats)
        if stats is not None:
            stats.passes += 1
        if visited == 0 or changed == 0:
            break
    return colours
