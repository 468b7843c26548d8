"""Simplicity-bias analysis of digitized noisy logistic-map trajectories.

The package samples the map x' = mu*x*(1-x) + noise over random starting
points, digitizes trajectories at the 0.5 threshold into binary strings,
estimates per-pattern probabilities and LZ76-based complexities, fits the
upper envelope of the complexity-probability scatter, and compares
Laplace-rule and algorithmic-probability next-bit predictors.
"""

from .engine import (
    DEFAULT_STRING_LENGTH,
    BoundaryPolicy,
    MapParams,
    RetryContext,
    RngStream,
    apply_boundary,
    generate_trajectory,
    sample_x0,
    step,
)
from .symbolize import THRESHOLD, SymbolString, digitize, perturb_measurements
from .complexity import (
    ComplexityScale,
    MapDerived,
    PowerTower,
    ScaleMethod,
    Typical,
    c_lz,
    c_lz_bulk,
    exhaustive_scale,
    integer_complexity_estimate,
    k_tilde,
    lz76_phrase_count,
    observed_scale,
    phrase_counts_bulk,
    random_corpus_scale,
)
from .estimator import (
    BiasMetrics,
    BoundFit,
    Dataset,
    DatasetRow,
    FrequencyTable,
    bias_metrics,
    bound_curve,
    build_dataset,
    fit_upper_bound,
    sample_distribution,
)
from .induction import (
    ExplicitRun,
    MapDerivedRun,
    PowerTowerRun,
    PredictionReport,
    RunScenario,
    ap_predict,
    compare_predictors,
    find_transition_index,
    laplace_predict,
    transition_lower_bound,
)
from .errors import ConfigurationError, FitError

__version__ = "0.1.0"
