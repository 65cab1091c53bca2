"""Strong (anytime-valid) confidence intervals for the AR(1) coefficient."""

__version__ = "0.1.0"

from .ar1_model import (
    Ar1Config,
    DegenerateInnovations,
    GaussianInnovations,
    Path,
    degenerate_innovations,
    gaussian_innovations,
    simulate_path,
)
from .baselines import (
    UnitRootQuantiles,
    simulate_unit_root_quantiles,
    tau_statistic,
    weak_interval_normal,
    weak_interval_unit_root,
)
from .confseq import (
    ConfSeqState,
    Interval,
    intersect,
    prediction_interval,
    start,
    step,
    strong_interval,
)
from .errors import (
    DegenerateStatisticError,
    InvalidConfigError,
    InvalidInputError,
    InvalidObservationError,
    ParseError,
    RejectedModelError,
    StrongCIError,
    UndefinedEstimateError,
)
from .harness import (
    CoverageReport,
    ExperimentConfig,
    run_coverage_experiment,
    run_figure_curve,
    run_table_experiment,
)
from .martingale import MixtureParams, log_lr, log_mixture, martingale_curve
from .stats_core import GammaStats, init_stats, ls_estimate, update
