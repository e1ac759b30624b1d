"""End-to-end self-paced symmetric NMF clustering."""

from dataclasses import dataclass

import numpy as np

from ._errors import InvalidK
from .hals import SolveTrace, per_sample_loss, solve_inner, theta_from_bound
from .linalg import FactorPair, validate_similarity
from .self_paced import (
    MODES,
    advance_schedule,
    compute_weights,
    init_schedule,
    regularizer_value,
)

__all__ = ["SpsConfig", "ClusteringResult", "init_factors", "extract_labels", "run_spsnmf"]


@dataclass(frozen=True)
class SpsConfig:
    """Solver configuration.

    Attributes
    ----------
    k : int
        Number of clusters (factor rank).
    mode : {"hard", "soft", "baseline"}
        Self-paced weighting scheme; "baseline" runs unweighted HALS.
    init_fraction : float
        Share of samples admitted in the first round.
    fraction_step : float
        Share of samples added per round.
    sweeps_per_round : int
        HALS sweeps between weight refreshes.
    conv_tol : float
        Relative objective decrease below which the solve stops, once every
        sample has been admitted.
    max_sweeps : int
        Hard cap on the total number of sweeps.
    seed : int
        Seed of the factor initialization.
    """

    k: int
    mode: str = "hard"
    init_fraction: float = 0.5
    fraction_step: float = 0.1
    sweeps_per_round: int = 10
    conv_tol: float = 1e-6
    max_sweeps: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise InvalidK(f"k must be >= 2, got {self.k}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 < self.init_fraction <= 1.0:
            raise ValueError("init_fraction must lie in (0, 1]")
        if not 0.0 < self.fraction_step <= 1.0:
            raise ValueError("fraction_step must lie in (0, 1]")
        if self.sweeps_per_round < 1 or self.max_sweeps < 1:
            raise ValueError("sweep counts must be positive")
        if not self.conv_tol > 0:
            raise ValueError("conv_tol must be positive")


@dataclass
class ClusteringResult:
    labels: np.ndarray
    factors: FactorPair
    weights_final: np.ndarray
    trace: SolveTrace
    theta: float
    sweeps_used: int
    converged: bool


def init_factors(X, k, seed):
    """Random nonnegative start with ``V0 = U0``.

    Entries of ``U0`` are uniform on ``[0, s]`` with ``s = sqrt(mean(X) / k)``,
    or ``s = 1e-3`` when ``X`` is all zero.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise InvalidK(f"k must satisfy 1 <= k <= n={n}, got {k}")
    mean = float(np.mean(X))
    scale = np.sqrt(mean / k) if mean > 0 else 1e-3
    rng = np.random.default_rng(seed)
    U0 = rng.uniform(0.0, scale, size=(n, k))
    return FactorPair(U0, U0.copy())


def extract_labels(U):
    """Cluster of each sample: index of the largest entry in its row of `U`.

    Ties go to the lowest column, so an all-zero row gets label 0.
    """
    return np.argmax(np.asarray(U), axis=1).astype(np.int64)


def run_spsnmf(X, cfg):
    """Cluster the similarity matrix `X` into ``cfg.k`` groups.

    Weights are refreshed from the current per-sample losses every
    ``cfg.sweeps_per_round`` sweeps while the schedule admits more samples.
    Once every sample is in, the weights are frozen and the solve runs until
    the relative objective decrease falls below ``cfg.conv_tol`` or
    ``cfg.max_sweeps`` is reached.
    """
    X = validate_similarity(X)
    F = init_factors(X, cfg.k, cfg.seed)
    theta = theta_from_bound(X, F.U)

    losses = per_sample_loss(X, F)
    state = init_schedule(cfg.mode, losses, cfg.init_fraction, cfg.fraction_step)

    trace = SolveTrace()
    used = 0
    converged = False
    w = compute_weights(state, losses)
    while used < cfg.max_sweeps:
        n_sweeps = min(cfg.sweeps_per_round, cfg.max_sweeps - used)
        reg = regularizer_value(state, w)
        # the objective jumps when harder samples enter, so the stopping
        # test only applies once the schedule has admitted everyone
        tol = cfg.conv_tol if state.all_included else None
        F, part = solve_inner(X, F, w, theta, n_sweeps, tol=tol, start=used, regularizer=reg)
        trace.extend(part)
        used += len(part)
        if part.converged:
            converged = True
            break
        if not state.all_included:
            losses = per_sample_loss(X, F)
            state = advance_schedule(state, losses)
            w = compute_weights(state, losses)

    return ClusteringResult(
        labels=extract_labels(F.U),
        factors=F,
        weights_final=w,
        trace=trace,
        theta=theta,
        sweeps_used=used,
        converged=converged,
    )
