"""Per-feature importance scores.

Two routes: the exact closed-form Shapley attribution for linear models under
feature independence (coefficient times deviation from the training mean, on
the margin scale for logistic models), and model-agnostic permutation
importance measured as seeded metric degradation.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Dataset
from .errors import DataError, ModelError
from .models import FittedModel, default_score

__all__ = [
    "Method",
    "AttributionResult",
    "linear_shap",
    "permutation_importance",
    "most_significant",
    "attribution_to_csv",
]


class Method(Enum):
    LINEAR_SHAP = "shap"
    PERMUTATION_IMPORTANCE = "perm"


@dataclass(frozen=True, eq=False)
class AttributionResult:
    """Global non-negative importance per feature, plus per-sample signed
    attributions when the method provides them."""

    method: Method
    per_sample: np.ndarray | None
    global_scores: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        scores = np.ascontiguousarray(self.global_scores, dtype=np.float64)
        scores.setflags(write=False)
        object.__setattr__(self, "global_scores", scores)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        if scores.shape != (len(self.feature_names),):
            raise DataError("global scores must align with feature names")
        if not np.isfinite(scores).all() or (scores < 0).any():
            raise DataError("global scores must be finite and non-negative")
        if self.per_sample is not None:
            per = np.ascontiguousarray(self.per_sample, dtype=np.float64)
            per.setflags(write=False)
            object.__setattr__(self, "per_sample", per)
            if per.ndim != 2 or per.shape[1] != len(self.feature_names):
                raise DataError("per-sample matrix must align with feature names")


def _check_alignment(m: FittedModel, d: Dataset) -> None:
    if d.feature_names != m.feature_names:
        raise ModelError(
            f"dataset columns {list(d.feature_names)} do not match the model's "
            f"{list(m.feature_names)}"
        )


def linear_shap(m: FittedModel, d: Dataset) -> AttributionResult:
    """Exact per-sample attributions for a linear model.

    attribution[i, j] = coefficient_j * (x[i, j] - train_mean_j), computed on
    the model's linear predictor (log-odds scale for logistic models). The
    global score is the mean absolute attribution per column, the usual
    summary-bar statistic.
    """
    _check_alignment(m, d)
    per_sample = (d.features - m.train_feature_means) * m.coefficients
    global_scores = np.abs(per_sample).mean(axis=0)
    return AttributionResult(Method.LINEAR_SHAP, per_sample, global_scores,
                             d.feature_names)


def permutation_importance(m: FittedModel, d: Dataset, repeats: int = 5,
                           seed: int = 0) -> AttributionResult:
    """Mean metric drop when one column is shuffled, clamped at zero.

    The metric is F1 for classification and R2 for regression, evaluated on
    ``d`` itself. Each (feature, repeat) pair gets its own seeded stream, so
    scores do not depend on evaluation order. A negative mean drop (the
    shuffle helped) counts as zero importance.
    """
    _check_alignment(m, d)
    if repeats < 1:
        raise DataError("repeats must be at least 1")
    baseline = default_score(m, d.features, d.target)
    n = d.n_samples
    scores = np.zeros(d.n_features)
    for j in range(d.n_features):
        drops = np.empty(repeats)
        for r in range(repeats):
            rng = np.random.default_rng(
                np.random.SeedSequence(seed, spawn_key=(j, r))
            )
            shuffled = d.features.copy()
            shuffled[:, j] = shuffled[rng.permutation(n), j]
            drops[r] = baseline - default_score(m, shuffled, d.target)
        scores[j] = max(0.0, float(drops.mean()))
    return AttributionResult(Method.PERMUTATION_IMPORTANCE, None, scores,
                             d.feature_names)


def most_significant(a: AttributionResult) -> tuple[str, float]:
    """The feature with the largest global score; ties go to the lowest index."""
    if len(a.feature_names) == 0:
        raise DataError("attribution result has no features")
    j = int(np.argmax(a.global_scores))
    return a.feature_names[j], float(a.global_scores[j])


def attribution_to_csv(a: AttributionResult) -> str:
    """CSV export, feature/score rows sorted by score descending (stable)."""
    order = sorted(range(len(a.feature_names)),
                   key=lambda j: (-a.global_scores[j], j))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["feature", "score"])
    for j in order:
        writer.writerow([a.feature_names[j], repr(float(a.global_scores[j]))])
    return buf.getvalue()
