"""Self-paced symmetric nonnegative matrix factorization for graph clustering."""

from ._errors import (
    IndexOutOfRange,
    InvalidFraction,
    InvalidK,
    InvalidLambdaPair,
    LengthMismatch,
    MissingLabelColumn,
    NonConvergenceWarning,
    ParseError,
    ShapeMismatch,
    SpsnmfError,
)
from .graph import GraphConfig, build_similarity, knn_sets, pairwise_sq_dists
from .hals import (
    SolveTrace,
    hals_sweep,
    per_sample_loss,
    solve_inner,
    theta_from_bound,
    update_column_u,
    update_column_v,
    weighted_objective,
)
from .linalg import FactorPair, frobenius_norm, rank_one_residual, spectral_norm
from .metrics import accuracy, ari, contingency, nmi
from .pipeline import ClusteringResult, SpsConfig, extract_labels, init_factors, run_spsnmf
from .self_paced import (
    SpScheduleState,
    advance_schedule,
    hard_weights,
    init_lambda_median,
    lambda_for_fraction,
    soft_weights,
)

__version__ = "0.1.0"
