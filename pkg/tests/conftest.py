"""Shared fixtures: synthetic datasets, optional real-data discovery, and the
acceptance-criteria result registry printed at the end of the run.

The two public UCI files are not redistributable with the package; the
fixtures look for them under ``data/`` in the repo root (or via the
ROARBAND_WINE_CSV / ROARBAND_DIABETES_CSV environment variables) and skip
their tests with a clear message when absent.
"""
import os
from pathlib import Path

import numpy as np
import pytest

from roarband import Dataset, Task, load_csv

from golden_tables import WINE_FEATURES

REPO_ROOT = Path(__file__).resolve().parent.parent

ACCEPTANCE_RESULTS: list[tuple[str, str, str]] = []


def record_acceptance(name: str, status: str, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, status, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in ACCEPTANCE_RESULTS:
        line = f"[{status:5s}] {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


def _find_data_file(env_var: str, *names: str) -> Path | None:
    override = os.environ.get(env_var)
    if override:
        p = Path(override)
        return p if p.exists() else None
    for name in names:
        p = REPO_ROOT / "data" / name
        if p.exists():
            return p
    return None


def wine_csv_path() -> Path | None:
    return _find_data_file("ROARBAND_WINE_CSV", "winequality-white.csv",
                           "winequality_white.csv")


def diabetes_csv_path() -> Path | None:
    return _find_data_file("ROARBAND_DIABETES_CSV",
                           "diabetes_binary_health_indicators_BRFSS2015.csv",
                           "cdc_diabetes.csv")


WINE_SKIP = ("wine-quality CSV not found; place winequality-white.csv under "
             "data/ or set ROARBAND_WINE_CSV")
DIABETES_SKIP = ("CDC diabetes CSV not found; place "
                 "diabetes_binary_health_indicators_BRFSS2015.csv under data/ "
                 "or set ROARBAND_DIABETES_CSV")


@pytest.fixture(scope="session")
def wine_csv_normalized(tmp_path_factory) -> Path:
    """The white-wine CSV with header spaces normalized to underscores, so
    feature names match the reference table spelling."""
    path = wine_csv_path()
    if path is None:
        pytest.skip(WINE_SKIP)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    header = lines[0].replace('"', "")
    delim = ";" if header.count(";") > header.count(",") else ","
    names = [c.strip().replace(" ", "_") for c in header.split(delim)]
    lines[0] = delim.join(names)
    normalized = tmp_path_factory.mktemp("wine") / "winequality_normalized.csv"
    normalized.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return normalized


@pytest.fixture(scope="session")
def wine_dataset(wine_csv_normalized) -> Dataset:
    """The white-wine regression set restricted to the ten reference features."""
    return load_csv(wine_csv_normalized, "quality", Task.REGRESSION,
                    feature_whitelist=list(WINE_FEATURES))


@pytest.fixture(scope="session")
def diabetes_dataset() -> Dataset:
    path = diabetes_csv_path()
    if path is None:
        pytest.skip(DIABETES_SKIP)
    return load_csv(path, "Diabetes_binary", Task.CLASSIFICATION)


@pytest.fixture
def tiny_csv(tmp_path) -> Path:
    p = tmp_path / "tiny.csv"
    p.write_text("a,b,y\n1,2,0\n3,4,1\n", encoding="utf-8")
    return p


def make_regression_dataset(n=80, p=4, noise=0.1, seed=0) -> Dataset:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    coef = rng.uniform(-2.0, 2.0, p)
    y = X @ coef + 0.5 + noise * rng.standard_normal(n)
    names = tuple(f"f{i}" for i in range(p))
    return Dataset(names, X, y, Task.REGRESSION)


def make_classification_dataset(n=200, p=4, seed=0) -> Dataset:
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    coef = rng.uniform(-2.0, 2.0, p)
    prob = 1.0 / (1.0 + np.exp(-(X @ coef - 0.3)))
    y = (rng.uniform(size=n) < prob).astype(float)
    names = tuple(f"f{i}" for i in range(p))
    return Dataset(names, X, y, Task.CLASSIFICATION)
