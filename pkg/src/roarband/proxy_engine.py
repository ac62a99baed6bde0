"""The iterative evaluation campaign: fit, attribute, band, remove or permute.

Each iteration fits the default model, scores it on the evaluation data,
computes attributions, predicts the next model's accuracy band from the top
feature's contribution share, then removes (ROAR) or permutes (PERMUTE) that
feature and repeats. The whole data is used for training and testing unless a
holdout fraction is requested.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .attribution import (
    AttributionResult,
    Method,
    linear_shap,
    most_significant,
    permutation_importance,
)
from .data import Dataset, dataset_digest, drop_column, replace_column
from .eai_metric import EaiBand, compute_band, compute_fcp, within_band
from .errors import CampaignError, DataError, ModelError
from .models import DEFAULT_HYPERPARAMETERS, default_score, fit

__all__ = [
    "Mode",
    "IterationRecord",
    "CampaignReport",
    "CampaignRow",
    "run_campaign",
    "band_hit_rate",
    "campaign_rows",
    "campaign_to_csv",
    "parse_campaign_csv",
]


class Mode(Enum):
    ROAR = "roar"
    PERMUTE = "permute"


@dataclass(frozen=True)
class IterationRecord:
    """One table row: what was most significant, how the model scored, and
    the band predicted for the next model."""

    iteration: int
    msf: str
    accuracy: float
    band: EaiBand | None
    within_previous_band: bool | None
    remaining_features: int
    note: str = ""


@dataclass(frozen=True)
class CampaignReport:
    mode: Mode
    attribution_method: Method
    dataset_digest: str
    seed: int
    records: tuple[IterationRecord, ...]
    model_defaults: dict = field(default_factory=dict)
    truncated: bool = False


class CampaignRow(NamedTuple):
    """Flat row view used by the CSV and table serializations."""

    iteration: int
    msf: str
    accuracy: float
    li: float | None
    ui: float | None
    within: bool | None


def _split_indices(n: int, holdout_fraction: float, seed: int):
    if not (0.0 < holdout_fraction < 1.0):
        raise CampaignError("holdout_fraction must be in (0, 1)")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, 0)))
    order = rng.permutation(n)
    n_eval = int(round(n * holdout_fraction))
    if n_eval < 2 or n - n_eval < 2:
        raise CampaignError("holdout split leaves fewer than 2 rows on one side")
    return np.sort(order[n_eval:]), np.sort(order[:n_eval])


def _rows_view(d: Dataset, idx: np.ndarray) -> Dataset:
    return Dataset(d.feature_names, d.features[idx], d.target[idx], d.task)


def _attribute(method: Method, m, d: Dataset, repeats: int, seed: int,
               iteration: int) -> AttributionResult:
    if method is Method.LINEAR_SHAP:
        return linear_shap(m, d)
    derived = int(np.random.SeedSequence(seed, spawn_key=(iteration, 0))
                  .generate_state(1, dtype=np.uint64)[0])
    return permutation_importance(m, d, repeats=repeats, seed=derived)


def run_campaign(
    d: Dataset,
    mode: Mode,
    attribution_method: Method = Method.LINEAR_SHAP,
    seed: int = 42,
    *,
    repeats: int = 5,
    holdout_fraction: float | None = None,
) -> CampaignReport:
    """Run the full evaluation loop and return one record per iteration.

    ROAR drops the most significant feature each iteration until one feature
    remains; PERMUTE replaces it with a seeded shuffle of itself and runs
    exactly as many iterations as there are features. The final record has no
    band. Deterministic for fixed (d, mode, attribution_method, seed).

    The campaign truncates early, with a diagnostic note on the last record,
    when a model cannot be fitted or when every attribution score is zero.
    """
    if d.n_features < 2:
        raise DataError("run_campaign needs at least 2 features")
    digest = dataset_digest(d)
    defaults = dict(DEFAULT_HYPERPARAMETERS)
    defaults["permutation_repeats"] = repeats
    defaults["holdout_fraction"] = holdout_fraction

    if holdout_fraction is None:
        train_idx = eval_idx = None
    else:
        train_idx, eval_idx = _split_indices(d.n_samples, holdout_fraction, seed)

    n_initial = d.n_features
    current = d
    prev_band: EaiBand | None = None
    records: list[IterationRecord] = []
    truncated = False

    for iteration in range(1, n_initial + 1):
        train_d = current if train_idx is None else _rows_view(current, train_idx)
        eval_d = current if eval_idx is None else _rows_view(current, eval_idx)
        remaining = current.n_features

        try:
            model = fit(train_d)
        except ModelError as exc:
            records.append(IterationRecord(
                iteration, "", math.nan, None, None,
                remaining, note=f"model fit failed: {exc}"))
            truncated = True
            break

        accuracy = default_score(model, eval_d.features, eval_d.target)
        within = None if prev_band is None else within_band(accuracy, prev_band)
        notes = []
        if model.rank_deficient:
            notes.append("rank-deficient fit (minimum-norm solution)")
        if not model.converged:
            notes.append("solver not converged (best iterate)")

        attr = _attribute(attribution_method, model, train_d, repeats, seed,
                          iteration)
        if float(attr.global_scores.sum()) == 0.0:
            notes.append("no informative feature: attribution scores all zero")
            records.append(IterationRecord(
                iteration, "", accuracy, None, within, remaining,
                note="; ".join(notes)))
            truncated = True
            break

        msf, top_score = most_significant(attr)
        last = iteration == n_initial
        band = None
        if not last:
            band = compute_band(accuracy, compute_fcp(top_score, attr.global_scores))
            if accuracy < 0.0:
                notes.append("negative metric: expected-change sign flipped")

        records.append(IterationRecord(
            iteration, msf, accuracy, band, within, remaining,
            note="; ".join(notes)))
        if last:
            break
        if mode is Mode.ROAR:
            current = drop_column(current, msf)
        else:
            col = current.column(msf)
            rng = np.random.default_rng(
                np.random.SeedSequence(seed, spawn_key=(iteration, 1)))
            current = replace_column(current, msf, col[rng.permutation(col.size)])
        prev_band = band

    return CampaignReport(mode, attribution_method, digest, seed,
                          tuple(records), defaults, truncated)


def band_hit_rate(r: CampaignReport) -> float:
    """Fraction of testable iterations whose accuracy landed inside the
    previous iteration's band."""
    if len(r.records) < 2:
        raise CampaignError("band_hit_rate needs at least 2 records")
    flags = [rec.within_previous_band for rec in r.records
             if rec.within_previous_band is not None]
    if not flags:
        raise CampaignError("no testable records (no bands were computed)")
    return sum(flags) / len(flags)


def campaign_rows(r: CampaignReport) -> list[CampaignRow]:
    return [CampaignRow(
        rec.iteration, rec.msf, rec.accuracy,
        None if rec.band is None else rec.band.lower,
        None if rec.band is None else rec.band.upper,
        rec.within_previous_band,
    ) for rec in r.records]


def campaign_to_csv(r: CampaignReport) -> str:
    """Machine-readable export, full precision: iteration,msf,accuracy,li,ui,within."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "msf", "accuracy", "li", "ui", "within"])
    for row in campaign_rows(r):
        writer.writerow([
            row.iteration,
            row.msf,
            repr(float(row.accuracy)),
            "" if row.li is None else repr(float(row.li)),
            "" if row.ui is None else repr(float(row.ui)),
            "" if row.within is None else ("true" if row.within else "false"),
        ])
    return buf.getvalue()


def parse_campaign_csv(text: str) -> list[CampaignRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["iteration", "msf", "accuracy", "li", "ui", "within"]:
        raise CampaignError(f"unexpected campaign CSV header: {header}")
    rows = []
    for cells in reader:
        if not cells:
            continue
        if len(cells) != 6:
            raise CampaignError(f"campaign CSV row with {len(cells)} fields: {cells}")
        it, msf, acc, li, ui, within = cells
        rows.append(CampaignRow(
            int(it), msf, float(acc),
            None if li == "" else float(li),
            None if ui == "" else float(ui),
            None if within == "" else within == "true",
        ))
    return rows
