"""Soft happy colouring toolkit: block-model instance generation, fast
heuristics, genetic/memetic engines, and a benchmarking harness."""

from .errors import (
    ConfigError,
    ParameterError,
    ParseError,
    SoftHappyError,
    UndefinedStatisticError,
    ValidationError,
)
from .graph import Graph
from .instance import Colouring, GenParams, Instance, validate_colouring
from .dimacs import (
    parse_colouring,
    parse_instance,
    read_colouring_file,
    read_instance_file,
    write_colouring,
    write_colouring_file,
    write_instance,
    write_instance_file,
)
from .generator import BatchRanges, SbmParams, community_sizes, sample_batch, sample_instance
from .metrics import (
    EvalReport,
    Evaluator,
    Thresholds,
    acd,
    classify_regime,
    count_happy,
    is_rho_happy,
    thresholds,
    thresholds_for_instance,
)
from .heuristics import HeuristicStats, lmc, ls, random_completion, rls
from .evolution import (
    EaConfig,
    Population,
    VARIANTS,
    config_for_variant,
    crossover,
    mutate,
    run_ga,
    run_ma,
    run_variant,
    seed_population,
    select_parents,
)
from .records import RESULT_COLUMNS, RunRecord, read_records_csv, write_records_csv
from .harness import assign_rhos, default_algo_configs, pair_seed, run_campaign
from .stats import WelchResult, format_p, t_cdf, t_two_sided_p, welch_t
from .plotdata import (
    AggregateRow,
    HistogramRow,
    SeriesPoint,
    aggregate,
    alpha_histograms,
    binned_series,
    emit_plot_data,
)

__version__ = "0.1.0"
