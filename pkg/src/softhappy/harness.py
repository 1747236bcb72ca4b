"""Batch experiment orchestration.

A campaign runs every (instance, algorithm) pair, each with a seed derived
from the campaign seed and the pair identity, so results do not depend on
worker count or completion order. Records stream into an append-only CSV;
rerunning a campaign skips pairs already present, which makes long runs
crash-resumable. A manifest JSON next to the CSV captures the algorithm
configurations for replay.

Each instance is assigned one happiness proportion rho for all algorithms:
drawn uniformly from (0, 1] at campaign setup by default, taken from the
instance's generator metadata with policy "suggested", or fixed.

When every configured algorithm terminates by generation count (no time
limit), the CSV is byte-identical across reruns after row sorting; the
wall_ms column is recorded as 0 in that mode since real timings would
break reproducibility.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from typing import Mapping, Sequence

from .errors import ConfigError
from .evolution import EaConfig, VARIANTS, config_for_variant, run_variant
from .instance import Instance
from .records import RESULT_COLUMNS, RunRecord, read_records_csv
from .rng import STREAM_RHO, derive_rng, stable_hash64, uniform_open_closed

logger = logging.getLogger(__name__)


def default_algo_configs(**overrides) -> dict[str, EaConfig]:
    """The six standard variants with shared parameter overrides."""
    return {name: config_for_variant(name, **overrides) for name in VARIANTS}


def _named_instances(instances) -> list[tuple[str, Instance]]:
    named = []
    for i, item in enumerate(instances):
        if isinstance(item, tuple):
            named.append((str(item[0]), item[1]))
        else:
            named.append((f"inst-{i:04d}", item))
    ids = [name for name, _ in named]
    if len(set(ids)) != len(ids):
        raise ConfigError("instance ids must be unique")
    return named


def assign_rhos(
    named: Sequence[tuple[str, Instance]], rho_policy, seed: int
) -> dict[str, float]:
    """Per-instance rho values, deterministic in (instances, policy, seed)."""
    if isinstance(rho_policy, Mapping):
        return {name: float(rho_policy[name]) for name, _ in named}
    if isinstance(rho_policy, (int, float)):
        return {name: float(rho_policy) for name, _ in named}
    if rho_policy == "uniform":
        rng = derive_rng(seed, STREAM_RHO)
        return {name: float(uniform_open_closed(rng)) for name, _ in named}
    if rho_policy == "suggested":
        rhos = {}
        for name, inst in named:
            if inst.params is None or inst.params.rho_suggested is None:
                raise ConfigError(f"instance {name} has no suggested rho in metadata")
            rhos[name] = float(inst.params.rho_suggested)
        return rhos
    raise ConfigError(f"unknown rho policy {rho_policy!r}")


def pair_seed(campaign_seed: int, instance_id: str, algo: str) -> int:
    return stable_hash64(campaign_seed, instance_id, algo)


def _run_pair(payload) -> tuple[str, str, RunRecord | None, str | None]:
    instance_id, inst, algo, cfg_dict, rho, seed, epsilon, zero_wall = payload
    try:
        cfg = EaConfig(**cfg_dict | {"seed": seed})
        _, record = run_variant(inst, rho, cfg, instance_id=instance_id, epsilon=epsilon)
        if zero_wall:
            record.wall_ms = 0
        return instance_id, algo, record, None
    except Exception as exc:  # pair failures must not sink the campaign
        return instance_id, algo, None, f"{type(exc).__name__}: {exc}"


def run_campaign(
    instances,
    algos: Mapping[str, EaConfig] | Sequence[EaConfig] | None = None,
    rho_policy="uniform",
    workers: int = 1,
    seed: int = 0,
    out_csv=None,
    resume: bool = True,
    epsilon: float = 0.1,
    manifest_path=None,
) -> list[RunRecord]:
    """Run every (instance, algorithm) pair and return all records,
    including previously completed ones when resuming."""
    named = _named_instances(instances)
    if not named:
        raise ConfigError("no instances given")
    if algos is None:
        algos = default_algo_configs()
    elif not isinstance(algos, Mapping):
        algos = {cfg.algo_name: cfg for cfg in algos}
    if not algos:
        raise ConfigError("no algorithm configs given")
    for cfg in algos.values():
        cfg.validate()

    rhos = assign_rhos(named, rho_policy, seed)
    deterministic = all(cfg.time_limit is None for cfg in algos.values())

    done: set[tuple[str, str]] = set()
    existing: list[RunRecord] = []
    if out_csv is not None and resume and os.path.exists(out_csv):
        existing = read_records_csv(out_csv)
        done = {(r.instance_id, r.algo) for r in existing}

    if out_csv is not None and manifest_path is None:
        manifest_path = str(out_csv) + ".manifest.json"
    if manifest_path is not None:
        _write_manifest(manifest_path, named, algos, rho_policy, seed, epsilon, rhos)

    tasks = []
    for instance_id, inst in named:
        for algo, cfg in algos.items():
            if (instance_id, algo) in done:
                continue
            cfg_dict = dataclasses.asdict(cfg)
            tasks.append(
                (
                    instance_id,
                    inst,
                    algo,
                    cfg_dict,
                    rhos[instance_id],
                    pair_seed(seed, instance_id, algo),
                    epsilon,
                    deterministic,
                )
            )

    out_fh = None
    writer = None
    if out_csv is not None:
        fresh = not (resume and os.path.exists(out_csv))
        out_fh = open(out_csv, "w" if fresh else "a", encoding="utf-8", newline="")
        writer = csv.writer(out_fh)
        if fresh:
            writer.writerow(RESULT_COLUMNS)

    new_records: list[RunRecord] = []
    failures: list[tuple[str, str, str]] = []

    def consume(result):
        instance_id, algo, record, error = result
        if error is not None:
            logger.warning("pair (%s, %s) failed: %s", instance_id, algo, error)
            failures.append((instance_id, algo, error))
            return
        new_records.append(record)
        if writer is not None:
            writer.writerow(record.to_row())
            out_fh.flush()

    try:
        if workers <= 1:
            for task in tasks:
                consume(_run_pair(task))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                pending = {pool.submit(_run_pair, task) for task in tasks}
                while pending:
                    finished, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in finished:
                        consume(fut.result())
    finally:
        if out_fh is not None:
            out_fh.close()

    if failures and out_csv is not None:
        _append_failures(str(out_csv) + ".failures.csv", failures)
    return existing + new_records


def _write_manifest(path, named, algos, rho_policy, seed, epsilon, rhos) -> None:
    manifest = {
        "campaign_seed": seed,
        "epsilon": epsilon,
        "rho_policy": rho_policy if isinstance(rho_policy, (str, int, float)) else dict(rho_policy),
        "rhos": rhos,
        "instances": [name for name, _ in named],
        "algos": {
            name: {
                "config": dataclasses.asdict(cfg),
                "hash": stable_hash64(*sorted(dataclasses.asdict(cfg).items())),
            }
            for name, cfg in algos.items()
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _append_failures(path, failures) -> None:
    fresh = not os.path.exists(path)
    with open(path, "a", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(["instance_id", "algo", "error"])
        writer.writerows(failures)


def sorted_records_csv_text(records: Sequence[RunRecord]) -> str:
    """Canonical row-sorted CSV text, for rerun comparisons."""
    from .records import records_to_csv_text

    ordered = sorted(records, key=lambda r: (r.instance_id, r.algo))
    return records_to_csv_text(ordered)
