"""Genetic and memetic engines over populations of colourings.

One engine loop serves both families: select the fittest half as parents,
refill the population with crossover offspring, mutate them, and (memetic
only) improve each offspring with local search before rescoring. The
incumbent best colouring is replaced only on strict improvement.

Six standard variants arise from the (seeding, improver) pair:

    ga-rnd     random population, no improvement
    ga-lmc     lmc population, no improvement
    ga-ls      ls-of-random population, no improvement
    ma-rnd     random population, ls improvement
    ma-lmc     lmc population, ls improvement
    ma-rls-ls  ls-of-random population, rls improvement

Runs are fully deterministic for a given seed when termination is
generation-based: every population member and every offspring draws from
its own stream keyed by (seed, generation, offspring index).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .heuristics import _ls_pass, lmc, random_completion
from .instance import Colouring, Instance
from .metrics import Evaluator, Thresholds, thresholds_for_instance
from .records import RunRecord
from .rng import STREAM_IMPROVE, STREAM_INIT, STREAM_OFFSPRING, as_generator, derive_rng

SEEDINGS = ("rnd", "lmc", "ls")
IMPROVERS = ("none", "ls", "rls")

VARIANTS: dict[str, tuple[str, str]] = {
    "ga-rnd": ("rnd", "none"),
    "ga-lmc": ("lmc", "none"),
    "ga-ls": ("ls", "none"),
    "ma-rnd": ("rnd", "ls"),
    "ma-lmc": ("lmc", "ls"),
    "ma-rls-ls": ("ls", "rls"),
}


@dataclass
class EaConfig:
    seeding: str = "rnd"
    improver: str = "none"
    pop_size: int = 20
    mute_factor: float = 0.005
    crossover_p: float = 0.5
    time_limit: float | None = 600.0
    max_generations: int | None = None
    min_generations: int = 3
    rls_budget: int = 50
    seed: int = 0

    def validate(self) -> None:
        if self.seeding not in SEEDINGS:
            raise ConfigError(f"unknown seeding {self.seeding!r}")
        if self.improver not in IMPROVERS:
            raise ConfigError(f"unknown improver {self.improver!r}")
        if self.pop_size < 2:
            raise ConfigError(f"pop_size must be >= 2, got {self.pop_size}")
        if not 0.0 <= self.mute_factor <= 1.0:
            raise ConfigError(f"mute_factor must lie in [0, 1], got {self.mute_factor}")
        if not 0.0 < self.crossover_p < 1.0:
            raise ConfigError(f"crossover_p must lie in (0, 1), got {self.crossover_p}")
        if self.time_limit is None and self.max_generations is None:
            raise ConfigError("need a time limit or a generation limit")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ConfigError(f"time_limit must be positive, got {self.time_limit}")
        if self.max_generations is not None and self.max_generations < 0:
            raise ConfigError(f"max_generations must be >= 0, got {self.max_generations}")
        if self.min_generations < 0:
            raise ConfigError(f"min_generations must be >= 0, got {self.min_generations}")
        if self.rls_budget < 1:
            raise ConfigError(f"rls_budget must be >= 1, got {self.rls_budget}")

    @property
    def algo_name(self) -> str:
        for name, combo in VARIANTS.items():
            if combo == (self.seeding, self.improver):
                return name
        family = "ga" if self.improver == "none" else "ma"
        return f"{family}-{self.seeding}-{self.improver}"


def config_for_variant(name: str, **overrides) -> EaConfig:
    if name not in VARIANTS:
        raise ConfigError(f"unknown variant {name!r}; expected one of {sorted(VARIANTS)}")
    seeding, improver = VARIANTS[name]
    return EaConfig(seeding=seeding, improver=improver, **overrides)


@dataclass
class Population:
    members: list[Colouring]
    scores: np.ndarray
    best_colouring: Colouring
    best_score: int


def _improve(colours, ev, free_mask, rng, improver, rls_budget) -> None:
    """Apply the configured improvement operator in place."""
    if improver == "ls":
        _ls_pass(colours, ev, free_mask, rng)
    elif improver == "rls":
        for _ in range(rls_budget):
            visited, changed = _ls_pass(colours, ev, free_mask, rng)
            if visited == 0 or changed == 0:
                break


def _build_member(inst: Instance, rho: float, seeding: str, rng, ev, free_mask) -> Colouring:
    if seeding == "rnd":
        return random_completion(inst, rng)
    if seeding == "lmc":
        return lmc(inst, rng)
    # "ls": one local-search pass over a fresh random completion
    colours = random_completion(inst, rng)
    _ls_pass(colours, ev, free_mask, rng)
    return colours


def seed_population(
    inst: Instance, rho: float, cfg: EaConfig, evaluator: Evaluator | None = None
) -> Population:
    """Initial population under the configured seeding, improved member by
    member for memetic configs, scored, with the incumbent initialised to
    the best member."""
    cfg.validate()
    ev = evaluator if evaluator is not None else Evaluator(inst, rho)
    free_mask = inst.precolour == 0
    members = []
    for i in range(cfg.pop_size):
        rng = derive_rng(cfg.seed, STREAM_INIT, i)
        colours = _build_member(inst, rho, cfg.seeding, rng, ev, free_mask)
        if cfg.improver != "none":
            _improve(colours, ev, free_mask, derive_rng(cfg.seed, STREAM_IMPROVE, i),
                     cfg.improver, cfg.rls_budget)
        members.append(colours)
    scores = np.array([ev.count(c) for c in members], dtype=np.int64)
    best = int(np.argmax(scores))  # first maximum: lowest index wins ties
    return Population(
        members=members,
        scores=scores,
        best_colouring=members[best].copy(),
        best_score=int(scores[best]),
    )


def _parent_indices(scores: np.ndarray, pop_size: int) -> np.ndarray:
    keep = math.ceil(pop_size / 2)
    return np.argsort(-scores, kind="stable")[:keep]


def select_parents(pop: Population) -> list[Colouring]:
    """The fittest half (rounded up), ties broken by lower index."""
    if len(pop.members) < 2:
        raise ConfigError("population must hold at least 2 members")
    idx = _parent_indices(pop.scores, len(pop.members))
    return [pop.members[i] for i in idx]


def _crossover_one(parents: list[Colouring], inst: Instance, p: float, rng) -> Colouring:
    if len(parents) < 2:
        raise ConfigError("crossover needs at least 2 parents")
    i1, i2 = rng.choice(len(parents), size=2, replace=False)
    child = parents[i2].copy()
    free = inst.free_vertices
    take = free[rng.random(free.size) < p]
    child[take] = parents[i1][take]
    return child


def crossover(parents: list[Colouring], inst: Instance, cfg: EaConfig, seed) -> list[Colouring]:
    """pop_size - len(parents) offspring; each picks two distinct parents
    uniformly and inherits every free vertex from the first with
    probability crossover_p, else from the second. Precoloured vertices
    stay fixed."""
    rng = as_generator(seed)
    return [
        _crossover_one(parents, inst, cfg.crossover_p, rng)
        for _ in range(cfg.pop_size - len(parents))
    ]


def mutation_count(cfg: EaConfig, n_free: int) -> int:
    """Round-half-up of mute_factor * free vertex count; may be zero."""
    return int(math.floor(cfg.mute_factor * n_free + 0.5))


def _mutate_one(colours: Colouring, inst: Instance, cfg: EaConfig, rng) -> None:
    free = inst.free_vertices
    m = mutation_count(cfg, free.size)
    if m == 0:
        return
    chosen = rng.choice(free, size=m, replace=False)
    colours[chosen] = rng.integers(1, inst.k + 1, size=m)


def mutate(offspring: list[Colouring], inst: Instance, cfg: EaConfig, seed) -> list[Colouring]:
    """In-place redraw of the mutation quota of free vertices per offspring;
    a redraw may repeat the current colour."""
    rng = as_generator(seed)
    for colours in offspring:
        _mutate_one(colours, inst, cfg, rng)
    return offspring


def run_ga(
    inst: Instance,
    rho: float,
    cfg: EaConfig,
    instance_id: str = "",
    trace: list | None = None,
    epsilon: float = 0.1,
) -> tuple[Colouring, RunRecord]:
    if cfg.improver != "none":
        raise ConfigError("run_ga requires improver='none'; use run_ma")
    return _run_engine(inst, rho, cfg, instance_id, trace, epsilon)


def run_ma(
    inst: Instance,
    rho: float,
    cfg: EaConfig,
    instance_id: str = "",
    trace: list | None = None,
    epsilon: float = 0.1,
) -> tuple[Colouring, RunRecord]:
    if cfg.improver == "none":
        raise ConfigError("run_ma requires improver 'ls' or 'rls'; use run_ga")
    return _run_engine(inst, rho, cfg, instance_id, trace, epsilon)


def run_variant(inst, rho, cfg, **kwargs) -> tuple[Colouring, RunRecord]:
    """Dispatch on cfg.improver; convenience for harness code."""
    if cfg.improver == "none":
        return run_ga(inst, rho, cfg, **kwargs)
    return run_ma(inst, rho, cfg, **kwargs)


def _run_engine(
    inst: Instance,
    rho: float,
    cfg: EaConfig,
    instance_id: str,
    trace: list | None,
    epsilon: float,
) -> tuple[Colouring, RunRecord]:
    cfg.validate()
    t0 = time.perf_counter()
    ev = Evaluator(inst, rho)
    free_mask = inst.precolour == 0
    target = inst.n

    pop = seed_population(inst, rho, cfg, evaluator=ev)
    members, scores = pop.members, pop.scores
    best_colouring, best_score = pop.best_colouring, pop.best_score

    generation = 0
    if trace is not None:
        trace.append((0, best_score, float(scores.mean()), _elapsed_ms(t0)))

    while True:
        if best_score >= target:
            break
        if cfg.max_generations is not None and generation >= cfg.max_generations:
            break
        if (
            cfg.time_limit is not None
            and time.perf_counter() - t0 >= cfg.time_limit
            and generation >= cfg.min_generations
        ):
            break

        idx = _parent_indices(scores, cfg.pop_size)
        parents = [members[i] for i in idx]
        parent_scores = scores[idx]

        offspring = []
        for j in range(cfg.pop_size - len(parents)):
            rng = derive_rng(cfg.seed, STREAM_OFFSPRING, generation, j)
            child = _crossover_one(parents, inst, cfg.crossover_p, rng)
            _mutate_one(child, inst, cfg, rng)
            if cfg.improver != "none":
                _improve(child, ev, free_mask, rng, cfg.improver, cfg.rls_budget)
            offspring.append(child)

        members = parents + offspring
        scores = np.concatenate(
            [parent_scores, [ev.count(c) for c in offspring]]
        ).astype(np.int64)
        generation += 1

        gen_best = int(np.argmax(scores))
        if scores[gen_best] > best_score:
            best_score = int(scores[gen_best])
            best_colouring = members[gen_best].copy()
        if trace is not None:
            trace.append((generation, best_score, float(scores.mean()), _elapsed_ms(t0)))

    wall_ms = _elapsed_ms(t0)
    th = thresholds_for_instance(inst, epsilon)
    record = _make_record(
        inst, cfg, rho, th, ev, best_colouring, best_score, generation, wall_ms, instance_id
    )
    return best_colouring, record


def _elapsed_ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def _make_record(
    inst: Instance,
    cfg: EaConfig,
    rho: float,
    th: Thresholds | None,
    ev: Evaluator,
    best: Colouring,
    best_score: int,
    generations: int,
    wall_ms: int,
    instance_id: str,
) -> RunRecord:
    report = ev.report(best, th)
    params = inst.params
    return RunRecord(
        instance_id=instance_id,
        algo=cfg.algo_name,
        seed=cfg.seed,
        n=inst.n,
        k=inst.k,
        p=params.p if params else None,
        q=params.q if params else None,
        pcc=params.pcc if params else None,
        rho=float(rho),
        mu=th.mu if th else None,
        xi=th.xi if th else None,
        xi_tilde=th.xi_tilde if th else None,
        regime_mu_xitilde=report.regime_mu_xitilde or "",
        regime_xi=report.regime_xi or "",
        alpha=report.alpha,
        acd=report.acd,
        complete=report.complete,
        acd_exact=report.acd is not None and report.acd == 1.0,
        generations=generations,
        wall_ms=wall_ms,
    )
