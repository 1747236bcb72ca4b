"""Command-line entry points.

Subcommands:
  generate  sample block-model instances into a directory + manifest CSV
  eval      evaluate a colouring file against an instance
  solve     run one heuristic or evolutionary variant on one instance
  bench     run an algorithm set over an instance directory -> results CSV
  stats     Welch t-tests over a results CSV
  plotdata  binned series / histograms from a results CSV (+ figures)
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys

import numpy as np

from . import dimacs
from .errors import SoftHappyError
from .evolution import EaConfig, VARIANTS, run_variant
from .generator import BatchRanges, sample_batch
from .harness import default_algo_configs, run_campaign
from .heuristics import DEFAULT_RLS_BUDGET, lmc, ls, random_completion, rls
from .metrics import count_happy, thresholds_for_instance
from .plotdata import (
    aggregate,
    alpha_histograms,
    binned_series,
    write_aggregate_csv,
    write_histogram_csv,
    write_series_csv,
)
from .records import read_records_csv
from .stats import format_p, welch_t

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SoftHappyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="softhappy")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample block-model instances")
    gen.add_argument("--n-range", nargs=2, type=int, default=[200, 600], metavar=("LO", "HI"))
    gen.add_argument("--k-range", nargs=2, type=int, default=[2, 20], metavar=("LO", "HI"))
    gen.add_argument("--pcc-range", nargs=2, type=int, default=[1, 10], metavar=("LO", "HI"))
    gen.add_argument("--p-range", nargs=2, type=float, default=[0.0, 1.0], metavar=("LO", "HI"))
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--per-n", type=int, default=None,
                     help="walk n through its range with this many instances per value")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out-dir", required=True)
    gen.set_defaults(func=cmd_generate)

    ev = sub.add_parser("eval", help="evaluate a colouring against an instance")
    ev.add_argument("instance")
    ev.add_argument("colouring")
    ev.add_argument("--rho", type=float, required=True)
    ev.add_argument("--epsilon", type=float, default=0.1)
    ev.add_argument("--json", action="store_true", help="print a JSON line instead of a table")
    ev.set_defaults(func=cmd_eval)

    sol = sub.add_parser("solve", help="run one algorithm on one instance")
    sol.add_argument("instance")
    sol.add_argument("--algo", required=True,
                     choices=["rnd", "lmc", "ls", "rls", "ga", "ma"])
    sol.add_argument("--rho", type=float, required=True)
    sol.add_argument("--seed", type=int, default=0)
    sol.add_argument("--seeding", choices=["rnd", "lmc", "ls"], default="rnd")
    sol.add_argument("--improver", choices=["none", "ls", "rls"], default=None)
    sol.add_argument("--pop-size", type=int, default=20)
    sol.add_argument("--mute-factor", type=float, default=0.005)
    sol.add_argument("--crossover-p", type=float, default=0.5)
    sol.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    sol.add_argument("--max-generations", type=int, default=None)
    sol.add_argument("--rls-budget", type=int, default=DEFAULT_RLS_BUDGET)
    sol.add_argument("--start", default=None,
                     help="input colouring file for ls/rls (default: random completion)")
    sol.add_argument("--epsilon", type=float, default=0.1)
    sol.add_argument("--out", default=None, help="colouring output file")
    sol.add_argument("--record", default=None,
                     help="JSON output: the run record (ga/ma) or the evaluation report")
    sol.add_argument("--trace", default=None, help="per-generation trace CSV (ga/ma only)")
    sol.set_defaults(func=cmd_solve)

    ben = sub.add_parser("bench", help="run an algorithm set over an instance directory")
    ben.add_argument("--instances", required=True, help="directory of instance files")
    ben.add_argument("--algos", default=None, help="TOML file of algorithm configs")
    ben.add_argument("--workers", type=int, default=1)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--out", required=True, help="results CSV path (appended on resume)")
    ben.add_argument("--rho", type=float, default=None, help="fixed rho for every instance")
    ben.add_argument("--rho-policy", choices=["campaign", "suggested"], default="campaign",
                     help="campaign: uniform (0,1] from the campaign seed; "
                          "suggested: use instance metadata")
    ben.add_argument("--time-limit", type=float, default=None)
    ben.add_argument("--max-generations", type=int, default=None)
    ben.add_argument("--epsilon", type=float, default=0.1)
    ben.add_argument("--no-resume", action="store_true")
    ben.set_defaults(func=cmd_bench)

    st = sub.add_parser("stats", help="Welch t-tests between algorithm pairs")
    st.add_argument("--results", required=True)
    st.add_argument("--pairs", default="all", help="'all' or 'algoA:algoB'")
    st.add_argument("--metric", choices=["alpha", "acd"], default="alpha")
    st.add_argument("--out", required=True)
    st.set_defaults(func=cmd_stats)

    pd = sub.add_parser("plotdata", help="binned plot series and histograms")
    pd.add_argument("--results", required=True)
    pd.add_argument("--axis", choices=["n", "rho", "k"], required=True)
    pd.add_argument("--bins", type=int, default=20)
    pd.add_argument("--grouping", choices=["overall", "xi", "mu-xitilde"], default="mu-xitilde")
    pd.add_argument("--out-prefix", default="plotdata")
    pd.add_argument("--no-figures", action="store_true",
                    help="write only the CSV series, skip PNG rendering")
    pd.set_defaults(func=cmd_plotdata)

    return parser


def cmd_generate(args) -> int:
    ranges = BatchRanges(
        n=tuple(args.n_range),
        k=tuple(args.k_range),
        pcc=tuple(args.pcc_range),
        p=tuple(args.p_range),
    )
    instances = sample_batch(ranges, args.count, args.seed, per_n=args.per_n)
    os.makedirs(args.out_dir, exist_ok=True)
    manifest_path = os.path.join(args.out_dir, "manifest.csv")
    with open(manifest_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["filename", "n", "k", "p", "q", "pcc", "rho_suggested", "seed"])
        for i, inst in enumerate(instances):
            filename = f"sbm-{i:04d}.col"
            dimacs.write_instance_file(inst, os.path.join(args.out_dir, filename))
            pr = inst.params
            writer.writerow(
                [filename, inst.n, inst.k, repr(pr.p), repr(pr.q), pr.pcc,
                 repr(pr.rho_suggested), pr.seed]
            )
    print(f"wrote {len(instances)} instances to {args.out_dir}")
    return 0


def cmd_eval(args) -> int:
    inst = dimacs.read_instance_file(args.instance)
    colours = dimacs.read_colouring_file(args.colouring, inst)
    th = thresholds_for_instance(inst, args.epsilon)
    report = count_happy(inst, colours, args.rho, th)
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(f"happy vertices   {report.happy_count} / {inst.n}")
        print(f"alpha            {report.alpha:.6f}")
        print(f"acd              {'-' if report.acd is None else f'{report.acd:.6f}'}")
        print(f"complete         {'yes' if report.complete else 'no'}")
        if report.regime_mu_xitilde:
            print(f"regime           {report.regime_mu_xitilde}, {report.regime_xi}")
    return 0


def cmd_solve(args) -> int:
    inst = dimacs.read_instance_file(args.instance)
    rho = args.rho

    if args.algo in ("ga", "ma"):
        improver = args.improver
        if improver is None:
            improver = "none" if args.algo == "ga" else ("rls" if args.seeding == "ls" else "ls")
        cfg = EaConfig(
            seeding=args.seeding,
            improver=improver,
            pop_size=args.pop_size,
            mute_factor=args.mute_factor,
            crossover_p=args.crossover_p,
            time_limit=args.time_limit if (args.time_limit or args.max_generations) else 600.0,
            max_generations=args.max_generations,
            rls_budget=args.rls_budget,
            seed=args.seed,
        )
        trace: list = []
        colours, record = run_variant(
            inst, rho, cfg,
            instance_id=os.path.basename(args.instance),
            trace=trace,
            epsilon=args.epsilon,
        )
        if args.record:
            with open(args.record, "w", encoding="utf-8") as fh:
                json.dump(dataclasses.asdict(record), fh, indent=2)
                fh.write("\n")
        if args.trace:
            with open(args.trace, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["generation", "best_score", "mean_score", "elapsed_ms"])
                writer.writerows(trace)
        print(
            f"{record.algo}: alpha={record.alpha:.6f} "
            f"acd={'-' if record.acd is None else f'{record.acd:.6f}'} "
            f"generations={record.generations} wall_ms={record.wall_ms}"
        )
    else:
        if args.algo == "rnd":
            colours = random_completion(inst, args.seed)
        elif args.algo == "lmc":
            colours = lmc(inst, args.seed)
        else:
            if args.start is not None:
                start = dimacs.read_colouring_file(args.start, inst)
            else:
                start = random_completion(inst, np.random.default_rng(args.seed))
            if args.algo == "ls":
                colours = ls(inst, start, rho, args.seed)
            else:
                colours = rls(inst, start, rho, args.seed, budget=args.rls_budget)
        report = count_happy(inst, colours, rho, thresholds_for_instance(inst, args.epsilon))
        if args.record:
            with open(args.record, "w", encoding="utf-8") as fh:
                json.dump(report.to_dict(), fh, indent=2)
                fh.write("\n")
        print(
            f"{args.algo}: alpha={report.alpha:.6f} "
            f"acd={'-' if report.acd is None else f'{report.acd:.6f}'} "
            f"complete={'yes' if report.complete else 'no'}"
        )

    out = args.out or (args.instance + ".colouring")
    dimacs.write_colouring_file(colours, out)
    return 0


def load_algo_configs(path, time_limit=None, max_generations=None) -> dict[str, EaConfig]:
    """Algorithm set from a TOML file: a [defaults] table plus [[algo]]
    entries with seeding/improver and optional per-algo overrides."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    defaults = doc.get("defaults", {})
    if time_limit is not None:
        defaults["time_limit"] = time_limit
    if max_generations is not None:
        defaults["max_generations"] = max_generations
    configs: dict[str, EaConfig] = {}
    for entry in doc.get("algo", []):
        entry = dict(entry)
        name = entry.pop("name", None)
        merged = {**defaults, **entry}
        if "seeding" not in merged and name in VARIANTS:
            merged["seeding"], merged["improver"] = VARIANTS[name]
        cfg = EaConfig(**merged)
        configs[name or cfg.algo_name] = cfg
    return configs


def cmd_bench(args) -> int:
    files = sorted(
        f for f in os.listdir(args.instances)
        if f.endswith(".col") or f.endswith(".dimacs") or f.endswith(".txt")
    )
    if not files:
        print(f"error: no instance files in {args.instances}", file=sys.stderr)
        return 2
    named = []
    skipped = []
    for f in files:
        try:
            named.append((f, dimacs.read_instance_file(os.path.join(args.instances, f))))
        except SoftHappyError as exc:
            skipped.append((f, str(exc)))
    if skipped:
        for f, msg in skipped:
            print(f"warning: skipping unreadable instance {f}: {msg}", file=sys.stderr)
        with open(args.out + ".failures.csv", "a", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            if fh.tell() == 0:
                writer.writerow(["instance_id", "algo", "error"])
            writer.writerows((f, "*", msg) for f, msg in skipped)

    overrides = {}
    if args.max_generations is not None:
        overrides["max_generations"] = args.max_generations
        overrides["time_limit"] = args.time_limit  # may be None: generation mode
    elif args.time_limit is not None:
        overrides["time_limit"] = args.time_limit
    if args.algos:
        algos = load_algo_configs(args.algos, args.time_limit, args.max_generations)
    else:
        algos = default_algo_configs(**overrides)

    rho_policy = args.rho if args.rho is not None else (
        "uniform" if args.rho_policy == "campaign" else "suggested"
    )
    records = run_campaign(
        named,
        algos,
        rho_policy=rho_policy,
        workers=args.workers,
        seed=args.seed,
        out_csv=args.out,
        resume=not args.no_resume,
        epsilon=args.epsilon,
    )
    print(f"{len(records)} records in {args.out}")
    return 0


def cmd_stats(args) -> int:
    records = read_records_csv(args.results)
    samples: dict[str, list[float]] = {}
    for rec in records:
        value = rec.alpha if args.metric == "alpha" else rec.acd
        if value is not None:
            samples.setdefault(rec.algo, []).append(value)
    algos = sorted(samples)
    if args.pairs == "all":
        pairs = [(a, b) for i, a in enumerate(algos) for b in algos[i + 1 :]]
    else:
        a, _, b = args.pairs.partition(":")
        pairs = [(a, b)]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algo_a", "algo_b", "n_a", "n_b", "mean_a", "mean_b", "t", "df", "p"])
        for a, b in pairs:
            res = welch_t(samples[a], samples[b])
            writer.writerow(
                [a, b, res.n1, res.n2, repr(res.mean1), repr(res.mean2),
                 repr(res.t), repr(res.df), format_p(res.p)]
            )
    print(f"wrote {len(pairs)} pair tests to {args.out}")
    return 0


def cmd_plotdata(args) -> int:
    records = read_records_csv(args.results)
    points = binned_series(records, args.axis, args.bins)
    hist = alpha_histograms(records)
    agg = aggregate(records, args.grouping)

    series_path = f"{args.out_prefix}-series-{args.axis}.csv"
    hist_path = f"{args.out_prefix}-histogram.csv"
    agg_path = f"{args.out_prefix}-summary.csv"
    write_series_csv(points, series_path)
    write_histogram_csv(hist, hist_path)
    write_aggregate_csv(agg, agg_path)
    written = [series_path, hist_path, agg_path]

    if not args.no_figures:
        from . import figures

        fig_series = f"{args.out_prefix}-series-{args.axis}.png"
        fig_hist = f"{args.out_prefix}-histogram.png"
        fig_bars = f"{args.out_prefix}-summary.png"
        figures.render_series(points, args.axis, fig_series)
        figures.render_histograms(hist, fig_hist)
        figures.render_mean_bars(agg, fig_bars)
        written += [fig_series, fig_hist, fig_bars]

    print("wrote " + ", ".join(written))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
