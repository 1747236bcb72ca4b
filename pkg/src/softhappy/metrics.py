"""Happiness evaluation, community-detection accuracy, and the
theoretical thresholds that split rho into behavioural regimes.

A vertex v is rho-happy under a total colouring when at least
ceil(rho * deg(v)) of its neighbours share its colour. The per-instance
quantities reported here are the rho-happy count, its ratio alpha, the
accuracy of community detection (fraction of vertices whose colour equals
their ground-truth community id), and completeness (every vertex happy).

For a block-model graph with intra/inter edge probabilities p and q and k
communities, three thresholds structure the outcomes:

  mu       = q / (p + (k-1) q)   below it, happiness decouples from the
                                 community structure
  xi_tilde = p / (p + (k-1) q)   the large-n threshold above which complete
                                 rho-happy colourings stop existing
  xi                             the finite-n threshold; tends to xi_tilde
                                 as n grows
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SoftHappyError
from .instance import Colouring, Instance

# ceil(rho * deg) is computed on floats; a decimal rho times an integer
# degree can land a hair above an exact integer, which would wrongly bump
# the requirement by one. Pull the product down by this tolerance first.
CEIL_TOLERANCE = 1e-9

REGIME_BELOW_MU = "below-mu"
REGIME_MU_TO_XITILDE = "mu-to-xitilde"
REGIME_ABOVE_XITILDE = "above-xitilde"
REGIME_BELOW_XI = "below-xi"
REGIME_ABOVE_XI = "above-xi"


@dataclass(frozen=True)
class Thresholds:
    xi: float
    mu: float
    xi_tilde: float
    epsilon: float


@dataclass(frozen=True)
class EvalReport:
    happy_count: int
    alpha: float
    acd: float | None
    complete: bool
    regime_mu_xitilde: str | None = None
    regime_xi: str | None = None

    def to_dict(self) -> dict:
        return {
            "happy_count": self.happy_count,
            "alpha": self.alpha,
            "acd": self.acd,
            "complete": self.complete,
            "regime_mu_xitilde": self.regime_mu_xitilde,
            "regime_xi": self.regime_xi,
        }


def happiness_requirement(rho: float, degrees: np.ndarray) -> np.ndarray:
    """Per-vertex same-colour neighbour requirement ceil(rho * deg)."""
    req = np.ceil(rho * degrees - CEIL_TOLERANCE).astype(np.int64)
    return np.maximum(req, 0)


class Evaluator:
    """Caches adjacency scratch arrays for repeated evaluation of one
    (instance, rho) pair; the population loops score thousands of
    colourings against the same pair."""

    def __init__(self, inst: Instance, rho: float):
        if not 0.0 <= rho <= 1.0:
            raise ParameterError(f"rho must lie in [0, 1], got {rho}")
        self.inst = inst
        self.rho = float(rho)
        g = inst.graph
        self.n = g.n
        # Counting over the edge list touches each edge once instead of
        # twice through the adjacency arrays.
        self._eu = np.ascontiguousarray(g.edge_array[:, 0])
        self._ev = np.ascontiguousarray(g.edge_array[:, 1])
        self.requirement = happiness_requirement(rho, g.degrees)

    def same_colour_counts(self, colours: Colouring) -> np.ndarray:
        same = colours[self._eu] == colours[self._ev]
        counts = np.bincount(self._eu[same], minlength=self.n)
        counts += np.bincount(self._ev[same], minlength=self.n)
        return counts

    def happy_mask(self, colours: Colouring) -> np.ndarray:
        return self.same_colour_counts(colours) >= self.requirement

    def count(self, colours: Colouring) -> int:
        return int(np.count_nonzero(self.happy_mask(colours)))

    def report(self, colours: Colouring, thresholds: Thresholds | None = None) -> EvalReport:
        happy = self.count(colours)
        regimes = (None, None)
        if thresholds is not None:
            regimes = classify_regime(self.rho, thresholds)
        comm = self.inst.community
        acd_value = None
        if comm is not None:
            acd_value = float(np.count_nonzero(colours == comm)) / self.n
        return EvalReport(
            happy_count=happy,
            alpha=happy / self.n,
            acd=acd_value,
            complete=happy == self.n,
            regime_mu_xitilde=regimes[0],
            regime_xi=regimes[1],
        )


def is_rho_happy(inst: Instance, colours: Colouring, v: int, rho: float) -> bool:
    """Direct per-vertex evaluation of the rho-happiness condition."""
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"rho must lie in [0, 1], got {rho}")
    neigh = inst.graph.neighbours(v)
    same = int(np.count_nonzero(colours[neigh] == colours[v]))
    need = math.ceil(rho * len(neigh) - CEIL_TOLERANCE)
    return same >= max(need, 0)


def count_happy(
    inst: Instance, colours: Colouring, rho: float, thresholds: Thresholds | None = None
) -> EvalReport:
    """Evaluate a colouring in one O(n + m) pass."""
    return Evaluator(inst, rho).report(colours, thresholds)


def acd(inst: Instance, colours: Colouring) -> float:
    """Accuracy of community detection: fraction of vertices whose colour
    equals their community id. Colour and community labels share the
    range 1..k and are anchored to each other by the precolouring, so no
    permutation matching is applied."""
    if inst.community is None:
        raise SoftHappyError("instance carries no community labels")
    return float(np.count_nonzero(colours == inst.community)) / inst.n


def thresholds(n: int, k: int, p: float, q: float, epsilon: float = 0.1) -> Thresholds:
    """Compute (xi, mu, xi_tilde) for the given block-model parameters.

    xi = max(min(ln((k/n ln(eps) + p e + (k-1) q) / (p + (k-1) q)),
                 p / (p + (k-1) q)),
             0)

    with e Euler's constant. A non-positive log argument counts as -inf,
    so the min/max clamps keep xi within [0, xi_tilde].
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if not 0.0 < q < p <= 1.0:
        raise ParameterError(f"need 0 < q < p <= 1, got p={p}, q={q}")
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")

    denom = p + (k - 1) * q
    xi_tilde = p / denom
    mu = q / denom
    log_arg = ((k / n) * math.log(epsilon) + p * math.e + (k - 1) * q) / denom
    log_branch = math.log(log_arg) if log_arg > 0.0 else -math.inf
    xi = max(min(log_branch, xi_tilde), 0.0)
    return Thresholds(xi=xi, mu=mu, xi_tilde=xi_tilde, epsilon=epsilon)


def thresholds_for_instance(inst: Instance, epsilon: float = 0.1) -> Thresholds | None:
    """Thresholds from an instance's generator metadata, if it has any."""
    if inst.params is None:
        return None
    return thresholds(inst.n, inst.k, inst.params.p, inst.params.q, epsilon)


def classify_regime(rho: float, th: Thresholds) -> tuple[str, str]:
    """Label rho against (mu, xi_tilde) and against xi.

    The middle regime is closed on both ends (mu <= rho <= xi_tilde), and
    the xi split treats rho = xi as below.
    """
    if rho < th.mu:
        band = REGIME_BELOW_MU
    elif rho <= th.xi_tilde:
        band = REGIME_MU_TO_XITILDE
    else:
        band = REGIME_ABOVE_XITILDE
    xi_side = REGIME_BELOW_XI if rho <= th.xi else REGIME_ABOVE_XI
    return band, xi_side
