"""Dataset ingestion, balanced subsampling, synthetic generation and correlation.

All values are immutable after construction: arrays are canonicalized to
float64 and marked read-only, so datasets can be shared freely across threads.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DataError

__all__ = [
    "Task",
    "Dataset",
    "SyntheticSpec",
    "SyntheticLayout",
    "load_csv",
    "balanced_subsample",
    "generate_synthetic",
    "generate_synthetic_detailed",
    "pearson_matrix",
    "drop_column",
    "replace_column",
    "dataset_to_csv",
    "dataset_digest",
]


class Task(Enum):
    CLASSIFICATION = "classification"
    REGRESSION = "regression"


def _readonly_f64(values, ndim: int) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise DataError(f"expected a {ndim}-d array, got {arr.ndim}-d")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """A named feature matrix with its target vector and task kind.

    Invariants (enforced at construction): at least 2 rows and 1 feature,
    unique non-empty feature names matching the column count, no NaN/Inf
    anywhere, and classification targets exactly 0 or 1.
    """

    feature_names: tuple[str, ...]
    features: np.ndarray
    target: np.ndarray
    task: Task

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "features", _readonly_f64(self.features, 2))
        object.__setattr__(self, "target", _readonly_f64(self.target, 1))
        n_rows, n_cols = self.features.shape
        if n_cols != len(self.feature_names):
            raise DataError(
                f"{len(self.feature_names)} feature names for {n_cols} columns"
            )
        if n_cols < 1:
            raise DataError("dataset needs at least one feature")
        if any(not name for name in self.feature_names):
            raise DataError("feature names must be non-empty")
        if len(set(self.feature_names)) != n_cols:
            raise DataError("feature names must be unique")
        if n_rows != self.target.shape[0]:
            raise DataError(
                f"{n_rows} feature rows but {self.target.shape[0]} target values"
            )
        if n_rows < 2:
            raise DataError("dataset needs at least two rows")
        if not np.isfinite(self.features).all():
            raise DataError("features contain NaN or Inf")
        if not np.isfinite(self.target).all():
            raise DataError("target contains NaN or Inf")
        if self.task is Task.CLASSIFICATION:
            labels = np.unique(self.target)
            if not np.isin(labels, (0.0, 1.0)).all():
                bad = [v for v in labels if v not in (0.0, 1.0)]
                raise DataError(f"non-binary label in classification target: {bad[0]!r}")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.features[:, self._index(name)]

    def _index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise DataError(f"no such feature: {name!r}") from None


def _detect_delimiter(header_line: str) -> str:
    # The public UCI files come in both comma and semicolon flavors.
    return ";" if header_line.count(";") > header_line.count(",") else ","


def load_csv(
    path: str | os.PathLike,
    target_column: str,
    task: Task,
    feature_whitelist: list[str] | None = None,
) -> Dataset:
    """Load a headered CSV into a Dataset, splitting off ``target_column``.

    The delimiter (comma or semicolon) is detected from the header line.
    Column order is preserved; when ``feature_whitelist`` is given, only the
    listed columns are kept, in the whitelist's order. Every cell must parse
    as a finite decimal number; parse errors report the line and column.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise DataError(f"no such file: {path}") from None
    if not text.strip():
        raise DataError(f"empty file: {path}")

    delimiter = _detect_delimiter(text.splitlines()[0])
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    header = [name.strip() for name in next(reader)]
    if len(set(header)) != len(header):
        dupes = sorted({n for n in header if header.count(n) > 1})
        raise DataError(f"duplicate column name(s) in header: {', '.join(dupes)}")
    if target_column not in header:
        raise DataError(f"target column {target_column!r} not found in header")

    if feature_whitelist is not None:
        missing = [n for n in feature_whitelist if n not in header]
        if missing:
            raise DataError(f"whitelisted feature(s) not in header: {', '.join(missing)}")
        if target_column in feature_whitelist:
            raise DataError(f"target column {target_column!r} cannot be a feature")
        keep = list(feature_whitelist)
    else:
        keep = [n for n in header if n != target_column]

    col_of = {name: header.index(name) for name in keep}
    target_idx = header.index(target_column)

    rows: list[list[float]] = []
    target: list[float] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DataError(
                f"line {lineno}: expected {len(header)} fields, got {len(row)}"
            )

        def parse(idx: int, name: str) -> float:
            cell = row[idx].strip()
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"line {lineno}, column {name!r}: cannot parse {cell!r} as a number"
                ) from None
            if not math.isfinite(value):
                raise DataError(
                    f"line {lineno}, column {name!r}: non-finite value {cell!r}"
                )
            return value

        rows.append([parse(col_of[name], name) for name in keep])
        y = parse(target_idx, target_column)
        if task is Task.CLASSIFICATION and y not in (0.0, 1.0):
            raise DataError(
                f"line {lineno}, column {target_column!r}: non-binary label {row[target_idx].strip()!r}"
            )
        target.append(y)

    if not rows:
        raise DataError(f"no data rows in {path}")
    return Dataset(tuple(keep), np.array(rows), np.array(target), task)


def balanced_subsample(d: Dataset, per_class: int, seed: int) -> Dataset:
    """Draw ``per_class`` rows of each class without replacement, seeded.

    Selected rows keep their original relative order, so the result is a pure
    function of (d, per_class, seed).
    """
    if d.task is not Task.CLASSIFICATION:
        raise DataError("balanced_subsample requires a classification dataset")
    if per_class < 1:
        raise DataError("per_class must be positive")
    rng = np.random.default_rng(seed)
    chosen = []
    for label in (0.0, 1.0):
        idx = np.flatnonzero(d.target == label)
        if idx.size < per_class:
            raise DataError(
                f"class {int(label)} has only {idx.size} rows, need {per_class}"
            )
        chosen.append(rng.choice(idx, size=per_class, replace=False))
    keep = np.sort(np.concatenate(chosen))
    return Dataset(d.feature_names, d.features[keep], d.target[keep], d.task)


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a seeded synthetic binary-classification dataset."""

    n_samples: int
    n_informative: int
    n_redundant: int = 0
    n_noise: int = 0
    class_separation: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 2:
            raise DataError("n_samples must be at least 2")
        if self.n_informative < 1:
            raise DataError("n_informative must be at least 1")
        if self.n_redundant < 0 or self.n_noise < 0:
            raise DataError("n_redundant and n_noise must be non-negative")
        if not (self.class_separation > 0):
            raise DataError("class_separation must be positive")

    @property
    def n_features(self) -> int:
        return self.n_informative + self.n_redundant + self.n_noise


@dataclass(frozen=True, eq=False)
class SyntheticLayout:
    """Where each generated column landed after the seeded shuffle.

    ``informative_columns[j]`` is the dataset column holding the j-th
    informative axis, and row r of ``redundant_weights`` reconstructs the
    column at ``redundant_columns[r]`` as a linear combination of the
    informative columns in that order.
    """

    informative_columns: tuple[int, ...]
    redundant_columns: tuple[int, ...]
    noise_columns: tuple[int, ...]
    redundant_weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "redundant_weights", _readonly_f64(self.redundant_weights, 2)
        )


def generate_synthetic_detailed(spec: SyntheticSpec) -> tuple[Dataset, SyntheticLayout]:
    """Generate a seeded synthetic dataset plus the layout of its columns.

    Labels are independent fair coin flips. Informative columns are
    unit-variance Gaussians centered at +/- class_separation/2 by class,
    redundant columns are exact random linear combinations of the informative
    ones (weights uniform on [-1, 1], at least one nonzero), and noise columns
    are standard normal, independent of the label. Columns are shuffled by the
    seed and named X1..Xn in final order. Deterministic for a fixed spec.
    """
    rng = np.random.default_rng(spec.seed)
    n, k = spec.n_samples, spec.n_informative
    labels = rng.integers(0, 2, size=n).astype(np.float64)
    centers = np.where(labels == 1.0, spec.class_separation / 2, -spec.class_separation / 2)
    informative = rng.standard_normal((n, k)) + centers[:, None]

    weights = np.zeros((spec.n_redundant, k))
    for r in range(spec.n_redundant):
        while True:
            w = rng.uniform(-1.0, 1.0, size=k)
            if np.abs(w).max() > 1e-12:
                break
        weights[r] = w
    redundant = informative @ weights.T
    noise = rng.standard_normal((n, spec.n_noise))

    raw = np.hstack([informative, redundant, noise])
    perm = rng.permutation(spec.n_features)
    inverse = np.empty_like(perm)
    inverse[perm] = np.arange(spec.n_features)

    names = tuple(f"X{i + 1}" for i in range(spec.n_features))
    dataset = Dataset(names, raw[:, perm], labels, Task.CLASSIFICATION)
    layout = SyntheticLayout(
        informative_columns=tuple(int(i) for i in inverse[:k]),
        redundant_columns=tuple(int(i) for i in inverse[k : k + spec.n_redundant]),
        noise_columns=tuple(int(i) for i in inverse[k + spec.n_redundant :]),
        redundant_weights=weights,
    )
    return dataset, layout


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    return generate_synthetic_detailed(spec)[0]


def pearson_matrix(d: Dataset, include_target: bool = False) -> np.ndarray:
    """Pearson correlation of all feature columns, optionally plus the target.

    The target, when included, is the last row/column. Raises on any
    zero-variance column, naming it.
    """
    columns = [d.features]
    names = list(d.feature_names)
    if include_target:
        columns.append(d.target[:, None])
        names.append("target")
    mat = np.hstack(columns)
    stds = mat.std(axis=0)
    for name, s in zip(names, stds):
        if s == 0.0:
            raise DataError(f"zero-variance column: {name}")
    corr = np.corrcoef(mat, rowvar=False)
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def drop_column(d: Dataset, name: str) -> Dataset:
    idx = d._index(name)
    if d.n_features < 2:
        raise DataError("cannot drop the only feature")
    keep = [j for j in range(d.n_features) if j != idx]
    names = tuple(n for n in d.feature_names if n != name)
    return Dataset(names, d.features[:, keep], d.target, d.task)


def replace_column(d: Dataset, name: str, values: np.ndarray) -> Dataset:
    idx = d._index(name)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (d.n_samples,):
        raise DataError(f"replacement column must have {d.n_samples} values")
    features = d.features.copy()
    features[:, idx] = values
    return Dataset(d.feature_names, features, d.target, d.task)


def dataset_to_csv(d: Dataset) -> str:
    """Serialize to the canonical comma CSV with the target column last, named 'target'.

    Feature values use full round-trip precision; classification labels are
    written as integers.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(d.feature_names) + ["target"])
    classify = d.task is Task.CLASSIFICATION
    for row, y in zip(d.features, d.target):
        cells = [repr(float(v)) for v in row]
        cells.append(str(int(y)) if classify else repr(float(y)))
        writer.writerow(cells)
    return buf.getvalue()


def dataset_digest(d: Dataset) -> str:
    """Content hash (sha256 hex) covering task, names, features and target."""
    h = hashlib.sha256()
    h.update(d.task.value.encode())
    h.update("\x00".join(d.feature_names).encode())
    h.update(np.ascontiguousarray(d.features).tobytes())
    h.update(np.ascontiguousarray(d.target).tobytes())
    return h.hexdigest()
