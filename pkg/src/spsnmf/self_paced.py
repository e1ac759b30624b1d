"""Self-paced sample weighting: hard and soft (mixture) regularizers.

Losses are raw squared residual row norms.  The age parameter ``lam`` is
the reciprocal of a loss threshold: samples with loss at most ``1/lam`` are
treated as easy.  The soft scheme adds a second parameter ``lam_prime > lam``
and assigns fractional weights to losses in ``(1/lam_prime, 1/lam)``.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from ._errors import InvalidFraction, InvalidLambdaPair

__all__ = [
    "EPS",
    "SpScheduleState",
    "init_lambda_median",
    "lambda_for_fraction",
    "hard_weights",
    "soft_weights",
    "hard_regularizer",
    "soft_regularizer",
    "regularizer_value",
    "compute_weights",
    "init_schedule",
    "advance_schedule",
]

EPS = 1e-12
MODES = ("hard", "soft", "baseline")


def _reciprocal(threshold):
    """Age whose loss threshold ``1/lam`` is not below `threshold`."""
    threshold = max(float(threshold), EPS)
    lam = 1.0 / threshold
    # 1/(1/t) can round below t, which would drop the threshold sample itself
    while 1.0 / lam < threshold:
        lam = np.nextafter(lam, 0.0)
    return float(lam)


def _inclusion_count(p, n):
    # tolerate accumulated float error, e.g. 0.5 + 0.1 + 0.1 = 0.7000000000000001
    return min(n, max(1, math.ceil(round(p * n, 9))))


def init_lambda_median(losses):
    """Initial age: reciprocal of the median loss (``1/EPS`` if the median is 0)."""
    losses = np.asarray(losses, dtype=np.float64)
    if losses.size == 0:
        raise ValueError("need at least one loss")
    return _reciprocal(np.median(losses))


def lambda_for_fraction(losses, p):
    """Age that admits at least a fraction `p` of the samples.

    The threshold is the ``ceil(p * n)``-th smallest loss; every sample tied
    with it is admitted too.
    """
    if not 0.0 < p <= 1.0:
        raise InvalidFraction(f"fraction must lie in (0, 1], got {p}")
    losses = np.sort(np.asarray(losses, dtype=np.float64))
    return _reciprocal(losses[_inclusion_count(p, losses.size) - 1])


def hard_weights(losses, lam):
    """Binary weights: 1 where ``loss <= 1/lam``, else 0."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    losses = np.asarray(losses, dtype=np.float64)
    return (losses <= 1.0 / lam).astype(np.float64)


def soft_weights(losses, lam, lam_prime):
    """Mixture weights.

    With ``zeta = 1 / (lam_prime - lam)``: weight 1 for ``loss <= 1/lam_prime``,
    0 for ``loss >= 1/lam``, and ``zeta / loss - lam * zeta`` in between.
    """
    if not lam_prime > lam > 0:
        raise InvalidLambdaPair(
            f"need lam_prime > lam > 0, got lam={lam}, lam_prime={lam_prime}")
    losses = np.asarray(losses, dtype=np.float64)
    zeta = 1.0 / (lam_prime - lam)
    w = np.zeros_like(losses)
    easy = losses <= 1.0 / lam_prime
    band = ~easy & (losses < 1.0 / lam)
    w[easy] = 1.0
    w[band] = zeta / losses[band] - lam * zeta
    return np.clip(w, 0.0, 1.0)


def hard_regularizer(w, lam):
    """``-(1/lam) * sum(w)``."""
    return -float(np.sum(w)) / lam


def soft_regularizer(w, lam, lam_prime):
    """``-zeta * sum(log(w + zeta * lam))`` with ``zeta = 1/(lam_prime - lam)``."""
    zeta = 1.0 / (lam_prime - lam)
    return -zeta * float(np.sum(np.log(np.asarray(w) + zeta * lam)))


@dataclass(frozen=True)
class SpScheduleState:
    """Immutable state of the self-paced schedule.

    `fraction` is the targeted share of admitted samples; it grows by `step`
    each round until it reaches 1.  `lam_prime` is only meaningful in soft
    mode.
    """

    mode: str
    lam: float
    lam_prime: float | None
    fraction: float
    step: float = 0.1
    round: int = 0
    all_included: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        if self.mode == "soft" and not (self.lam_prime is not None and self.lam_prime > self.lam):
            raise InvalidLambdaPair("soft mode needs lam_prime > lam")
        if not 0.0 <= self.fraction <= 1.0:
            raise InvalidFraction(f"fraction must lie in [0, 1], got {self.fraction}")

    @property
    def zeta(self):
        return 1.0 / (self.lam_prime - self.lam)


def _lambda_prime(losses, fraction, step, lam):
    """Soft-mode ``lam_prime``: full weight for the previous fraction's samples.

    Falls back to a value just above `lam` when the two thresholds coincide,
    which leaves an empty mixture band.
    """
    prev = round(fraction - step, 12)
    lam_prime = lambda_for_fraction(losses, prev) if prev > 0 else 1.0 / EPS
    if not lam_prime > lam:
        lam_prime = lam * (1.0 + 1e-9) + EPS
    return lam_prime


def compute_weights(state, losses):
    """Weights implied by `state` for the given losses."""
    if state.mode == "baseline":
        return np.ones(np.asarray(losses).shape[0])
    if state.mode == "hard":
        return hard_weights(losses, state.lam)
    return soft_weights(losses, state.lam, state.lam_prime)


def regularizer_value(state, w):
    if state.mode == "hard":
        return hard_regularizer(w, state.lam)
    if state.mode == "soft":
        return soft_regularizer(w, state.lam, state.lam_prime)
    return 0.0


def _included(mode, fraction, losses, lam):
    if fraction < 1.0:
        return False
    if mode == "hard":
        return bool(np.all(hard_weights(losses, lam) == 1.0))
    return True


def init_schedule(mode, losses, init_fraction=0.5, step=0.1):
    """Starting schedule state.

    An initial fraction of exactly 0.5 uses the median loss as threshold;
    other fractions use the matching order statistic.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not 0.0 < step <= 1.0:
        raise ValueError("step must lie in (0, 1]")
    if mode == "baseline":
        return SpScheduleState("baseline", 1.0, None, 1.0, step, 0, True)
    if not 0.0 < init_fraction <= 1.0:
        raise InvalidFraction(f"init_fraction must lie in (0, 1], got {init_fraction}")
    if init_fraction == 0.5:
        lam = init_lambda_median(losses)
    else:
        lam = lambda_for_fraction(losses, init_fraction)
    lam_prime = _lambda_prime(losses, init_fraction, step, lam) if mode == "soft" else None
    return SpScheduleState(mode, lam, lam_prime, init_fraction, step, 0,
                           _included(mode, init_fraction, losses, lam))


def advance_schedule(state, losses):
    """Admit the next `step` of samples, re-deriving thresholds from `losses`."""
    if state.mode == "baseline":
        return replace(state, round=state.round + 1)
    fraction = min(1.0, round(state.fraction + state.step, 12))
    lam = lambda_for_fraction(losses, fraction)
    lam_prime = _lambda_prime(losses, fraction, state.step, lam) if state.mode == "soft" else None
    return replace(state, lam=lam, lam_prime=lam_prime, fraction=fraction,
                   round=state.round + 1,
                   all_included=_included(state.mode, fraction, losses, lam))
