"""Greedy sparse recovery with regularized estimation steps, plus a benchmark harness.

Recovery algorithms: orthogonal matching pursuit (OMP), its Tikhonov- and
Landweber-regularized variants (T-OMP, L-OMP), the LMS-based stochastic
gradient pursuit (SGP), and CoSaMP.  The harness sweeps sensing sizes and
noise levels over seeded Monte-Carlo trials and reports NRMSE and support
statistics as CSV and SVG.
"""

__version__ = "0.1.0"

from .analysis import (
    BoundCheck,
    LandweberBound,
    TrialMetrics,
    check_landweber_bound,
    check_tikhonov_bound,
    landweber_bound_ensemble,
    landweber_limit_gap,
    nrmse,
    ric_exact,
    snr_db,
    support_metrics,
    tikhonov_bound_ensemble,
    trial_metrics,
)
from .config import (
    SGP_FIXED_TAU,
    AlgorithmEntry,
    ExperimentConfig,
    default_algorithm_tokens,
    parse_algorithm_token,
    parse_config,
)
from .errors import (
    DimensionMismatch,
    InvalidDims,
    InvalidOmega,
    NonFiniteEntries,
    NotPositiveDefinite,
    ParseError,
    PursuitLabError,
    RankDeficient,
    SingularMatrix,
    TooLarge,
    UndefinedSnr,
    ValidationError,
    ZeroSignal,
    ZeroSpread,
)
from .experiment import (
    CellSummary,
    ExperimentResult,
    TrialRecord,
    make_instance,
    output_paths,
    run_experiment,
    run_trial,
    write_csv,
    write_manifest,
    write_trials_csv,
)
from .linalg import (
    condition_number,
    frobenius_norm,
    gram_eig_extremes,
    inner,
    least_squares,
    matvec,
    matvec_transpose,
    solve_tikhonov,
    vec_norm2,
)
from .model import (
    Measurement,
    SensingMatrix,
    SparseSignal,
    gen_gaussian_matrix,
    gen_measurement,
    gen_sensing_matrix,
    gen_sparse_signal,
)
from .pursuit import (
    MAX_ITERATIONS,
    RESIDUAL_MET,
    STALLED,
    AlgorithmSpec,
    RecoveryResult,
    StoppingRule,
    auto_sgp_step,
    observation_vector,
    recover,
    recover_cosamp,
    recover_lomp,
    recover_omp,
    recover_sgp,
    recover_tomp,
)
from .rng import Rng, hash64
from .svgplot import write_svg_plots
