"""Linear models with fixed default hyperparameters, plus R2 and F1 scoring.

Regression is exact least squares (rank-revealing, minimum-norm on
deficiency). Classification is L2-penalized logistic regression on the
standard inverse-strength convention, solved by damped Newton / IRLS. Both
fits are deterministic.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset, Task
from .errors import ModelError

__all__ = [
    "FittedModel",
    "fit",
    "predict",
    "linear_predictor",
    "score_r2",
    "score_f1",
    "default_score",
    "model_to_text",
    "DEFAULT_HYPERPARAMETERS",
]

RIDGE_INVERSE_STRENGTH = 1.0  # "C": penalty is ||w||^2 / (2C), intercept unpenalized
CLASSIFICATION_THRESHOLD = 0.5
NEWTON_MAX_ITER = 100
NEWTON_GRAD_TOL = 1e-8

DEFAULT_HYPERPARAMETERS = {
    "ridge_inverse_strength": RIDGE_INVERSE_STRENGTH,
    "classification_threshold": CLASSIFICATION_THRESHOLD,
    "newton_max_iter": NEWTON_MAX_ITER,
    "newton_grad_tol": NEWTON_GRAD_TOL,
}


@dataclass(frozen=True, eq=False)
class FittedModel:
    """Coefficients, intercept and training-column means of a fitted model.

    ``converged`` is False when the Newton solver hit its iteration cap
    (classification only); ``rank_deficient`` is True when regression fell
    back to the minimum-norm solution.
    """

    task: Task
    coefficients: np.ndarray
    intercept: float
    feature_names: tuple[str, ...]
    train_feature_means: np.ndarray
    converged: bool = True
    rank_deficient: bool = False

    def __post_init__(self):
        coef = np.ascontiguousarray(self.coefficients, dtype=np.float64)
        means = np.ascontiguousarray(self.train_feature_means, dtype=np.float64)
        coef.setflags(write=False)
        means.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "train_feature_means", means)
        n = len(self.feature_names)
        if coef.shape != (n,) or means.shape != (n,):
            raise ModelError("coefficients, means and feature names must align")
        if not (np.isfinite(coef).all() and np.isfinite(means).all()
                and np.isfinite(self.intercept)):
            raise ModelError("model parameters must be finite")


def fit(d: Dataset) -> FittedModel:
    """Fit the default model for the dataset's task.

    Regression: exact least squares via SVD; rank deficiency yields the
    minimum-norm solution and sets ``rank_deficient``. Classification:
    logistic regression with ridge penalty 1/(2C), C=1, solved by damped
    Newton to gradient max-norm <= 1e-8 or 100 iterations; an unconverged fit
    returns the best iterate with ``converged=False``.
    """
    n, p = d.features.shape
    if n <= p:
        warnings.warn(
            f"fitting {p} features on only {n} samples; estimates may be unstable",
            UserWarning,
            stacklevel=2,
        )
    means = d.features.mean(axis=0)
    if d.task is Task.REGRESSION:
        coef, intercept, deficient = _fit_least_squares(d.features, d.target)
        return FittedModel(d.task, coef, intercept, d.feature_names, means,
                           rank_deficient=deficient)
    coef, intercept, converged = _fit_logistic(d.features, d.target)
    return FittedModel(d.task, coef, intercept, d.feature_names, means,
                       converged=converged)


def _with_intercept(features: np.ndarray) -> np.ndarray:
    return np.column_stack([features, np.ones(features.shape[0])])


def _fit_least_squares(X, y):
    design = _with_intercept(X)
    solution, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if not np.isfinite(solution).all():
        raise ModelError("least-squares solution is not finite")
    return solution[:-1], float(solution[-1]), rank < design.shape[1]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _fit_logistic(X, y, c=RIDGE_INVERSE_STRENGTH,
                  max_iter=NEWTON_MAX_ITER, grad_tol=NEWTON_GRAD_TOL):
    design = _with_intercept(X)
    n, p = design.shape
    penalty = np.ones(p) / c
    penalty[-1] = 0.0  # intercept never penalized

    def objective(theta):
        z = design @ theta
        return float(np.logaddexp(0.0, z).sum() - y @ z
                     + 0.5 * penalty @ (theta * theta))

    def gradient(theta):
        prob = _sigmoid(design @ theta)
        return design.T @ (prob - y) + penalty * theta

    theta = np.zeros(p)
    value = objective(theta)
    converged = False
    for _ in range(max_iter):
        grad = gradient(theta)
        if np.abs(grad).max() <= grad_tol:
            converged = True
            break
        prob = _sigmoid(design @ theta)
        weights = prob * (1.0 - prob)
        hessian = design.T @ (design * weights[:, None]) + np.diag(penalty)
        step = _solve_newton_step(hessian, grad)
        descent = grad @ step
        resolution = 64.0 * np.finfo(np.float64).eps * max(1.0, abs(value))
        if abs(descent) <= resolution and np.abs(step).max() < 1e6:
            # Near the optimum the predicted decrease drops below what the
            # objective can resolve in float64; take the raw Newton step and
            # let the gradient criterion decide.
            theta = theta + step
            value = objective(theta)
            continue
        # Backtracking (Armijo) keeps each damped Newton iteration monotone.
        t = 1.0
        improved = False
        for _ in range(50):
            candidate = theta + t * step
            cand_value = objective(candidate)
            if cand_value <= value + 1e-4 * t * descent:
                theta, value = candidate, cand_value
                improved = True
                break
            t /= 2.0
        if not improved:
            break
    else:
        converged = np.abs(gradient(theta)).max() <= grad_tol
    if not np.isfinite(theta).all():
        raise ModelError("logistic solver produced non-finite parameters")
    return theta[:-1], float(theta[-1]), converged


def _solve_newton_step(hessian, grad):
    damping = 0.0
    eye = np.eye(hessian.shape[0])
    for _ in range(12):
        try:
            step = np.linalg.solve(hessian + damping * eye, -grad)
        except np.linalg.LinAlgError:
            step = None
        if step is not None and np.isfinite(step).all():
            return step
        damping = max(damping * 10.0, 1e-8 * max(1.0, np.trace(hessian)))
    raise ModelError("singular Hessian in logistic solver")


def _check_width(m: FittedModel, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != m.coefficients.shape[0]:
        raise ModelError(
            f"feature matrix has {features.shape[-1] if features.ndim == 2 else '?'} "
            f"columns, model expects {m.coefficients.shape[0]}"
        )
    return features


def linear_predictor(m: FittedModel, features: np.ndarray) -> np.ndarray:
    """The raw linear score (margin / log-odds scale for classification)."""
    return _check_width(m, features) @ m.coefficients + m.intercept


def predict(m: FittedModel, features: np.ndarray) -> np.ndarray:
    """Predictions: the linear value for regression, P(y=1) for classification."""
    z = linear_predictor(m, features)
    if not np.isfinite(z).all():
        raise ModelError("non-finite prediction")
    return _sigmoid(z) if m.task is Task.CLASSIFICATION else z


def score_r2(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Coefficient of determination, 1 - SS_res/SS_tot."""
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise ModelError("score_r2 needs two equal-length non-empty vectors")
    ss_tot = float(((y_true - y_true.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise ModelError("score_r2 is undefined for a zero-variance target")
    ss_res = float(((y_true - y_pred) ** 2).sum())
    return 1.0 - ss_res / ss_tot


def score_f1(y_true: np.ndarray, prob: np.ndarray,
             threshold: float = CLASSIFICATION_THRESHOLD) -> float:
    """Binary F1 with positive class 1 and predictions (prob >= threshold).

    Returns 0.0 when there are no true positives and nothing was predicted
    positive (the 0/0 convention).
    """
    y_true = np.asarray(y_true, dtype=np.float64)
    prob = np.asarray(prob, dtype=np.float64)
    if y_true.shape != prob.shape or y_true.size == 0:
        raise ModelError("score_f1 needs two equal-length non-empty vectors")
    if not (0.0 < threshold < 1.0):
        raise ModelError("threshold must be in (0, 1)")
    pred = prob >= threshold
    actual = y_true == 1.0
    tp = int(np.count_nonzero(pred & actual))
    fp = int(np.count_nonzero(pred & ~actual))
    fn = int(np.count_nonzero(~pred & actual))
    denom = 2 * tp + fp + fn
    return 0.0 if denom == 0 else 2 * tp / denom


def default_score(m: FittedModel, features: np.ndarray, target: np.ndarray) -> float:
    """The campaign metric: F1 at the default threshold for classification,
    R2 for regression."""
    out = predict(m, features)
    if m.task is Task.CLASSIFICATION:
        return score_f1(target, out)
    return score_r2(target, out)


def model_to_text(m: FittedModel) -> str:
    """Plain-text key/value dump: one line per feature coefficient, then the intercept."""
    lines = [f"{name} = {value:.17g}"
             for name, value in zip(m.feature_names, m.coefficients)]
    lines.append(f"intercept = {m.intercept:.17g}")
    return "\n".join(lines) + "\n"
