"""The expected-accuracy band: contribution share, expected change, interval.

Given the current metric value and the top feature's share of all attribution
scores, the band predicts where the metric should land after that feature is
removed or permuted: [acc - acc*share, acc + acc*share].
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ZeroAttributionError

__all__ = ["EaiBand", "compute_fcp", "compute_band", "within_band"]


@dataclass(frozen=True)
class EaiBand:
    """Symmetric interval around ``initial_acc`` with half-width ``expected_delta``."""

    initial_acc: float
    fcp: float
    expected_delta: float
    lower: float
    upper: float


def compute_fcp(smsf: float, all_scores) -> float:
    """Feature contribution percentage: top score over the sum of all scores.

    ``smsf`` must be the maximum of ``all_scores`` (non-negative). All-zero
    scores mean the explainer found nothing informative and raise
    ZeroAttributionError so callers can stop with a diagnostic.
    """
    scores = np.asarray(all_scores, dtype=np.float64)
    if scores.ndim != 1 or scores.size == 0:
        raise ValueError("all_scores must be a non-empty vector")
    if not np.isfinite(scores).all() or (scores < 0).any():
        raise ValueError("scores must be finite and non-negative")
    total = float(scores.sum())
    if total == 0.0:
        raise ZeroAttributionError(
            "no informative feature: all attribution scores are zero"
        )
    top = float(scores.max())
    if not math.isclose(smsf, top, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError(f"smsf {smsf!r} is not the maximum score {top!r}")
    return smsf / total


def compute_band(initial_acc: float, fcp: float) -> EaiBand:
    """Band around the current metric: half-width = initial_acc * fcp.

    The endpoints are not clamped to [0, 1]; display-time clamping is a
    report-layer option. A negative metric flips the sign of the expected
    change, so the endpoints are swapped (with a warning) to keep
    lower <= upper.
    """
    if not math.isfinite(initial_acc):
        raise ValueError("initial_acc must be finite")
    if not (0.0 < fcp <= 1.0):
        raise ValueError(f"fcp must be in (0, 1], got {fcp!r}")
    delta = initial_acc * fcp
    lower, upper = initial_acc - delta, initial_acc + delta
    if delta < 0.0:
        warnings.warn(
            "negative metric flips the expected-change sign; "
            "interval endpoints swapped to keep lower <= upper",
            RuntimeWarning,
            stacklevel=2,
        )
        lower, upper, delta = upper, lower, -delta
    return EaiBand(float(initial_acc), float(fcp), delta, lower, upper)


def within_band(next_acc: float, band: EaiBand) -> bool:
    """Closed-interval test: boundary values count as inside."""
    return band.lower <= next_acc <= band.upper
