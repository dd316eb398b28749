"""Pretreatment transforms: sigma-bound outlier removal, min-max scaling,
z-score standardization.

All transforms are two-phase: a fit step learns per-column parameters from a
training set, an apply step maps any compatible matrix through them. The
combined helpers exist because the benchmark usually fits and applies in one
breath, but fold-wise evaluation reuses the split phases directly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ColumnCountMismatch, DegenerateColumnWarning, PipelineError, TooFewRows


@dataclass(frozen=True)
class OutlierRule:
    """Row-removal rule: any feature outside mean +/- k_sigma * sigma.

    sigma_mode "population" divides by n (the default everywhere in this
    package); "sample" divides by n - 1 and exists for sensitivity checks.
    """

    k_sigma: float = 3.0
    sigma_mode: str = "population"

    def __post_init__(self):
        if self.k_sigma <= 0:
            raise PipelineError(f"k_sigma must be positive, got {self.k_sigma}")
        if self.sigma_mode not in ("population", "sample"):
            raise PipelineError(f"unknown sigma_mode {self.sigma_mode!r}")


@dataclass(frozen=True)
class MinMaxParams:
    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "minimum", np.asarray(self.minimum, dtype=np.float64))
        object.__setattr__(self, "maximum", np.asarray(self.maximum, dtype=np.float64))
        if np.any(self.maximum < self.minimum):
            raise PipelineError("max < min in fitted min-max parameters")

    @property
    def n_cols(self) -> int:
        return self.minimum.shape[0]


@dataclass(frozen=True)
class ZScoreParams:
    mean: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=np.float64))
        if np.any(self.sigma < 0):
            raise PipelineError("negative sigma in fitted z-score parameters")

    @property
    def n_cols(self) -> int:
        return self.mean.shape[0]


def _column_sigma(X: np.ndarray, mode: str) -> np.ndarray:
    ddof = 0 if mode == "population" else 1
    return X.std(axis=0, ddof=ddof)


def remove_outliers(ds: Dataset, rule: OutlierRule = OutlierRule()):
    """Single-pass removal of rows with any feature outside the sigma bounds.

    Column statistics come from the full input, computed once; they are not
    re-estimated after removals. Zero-spread columns are reported with a
    DegenerateColumnWarning, kept, and never cause a removal.

    Returns (clean dataset, removed_count, removed_row_indices).
    """
    if ds.provenance != "raw":
        raise PipelineError(
            f"outlier removal expects the raw data form, got {ds.provenance!r}"
        )
    if ds.n_rows < 2:
        raise TooFewRows(2, ds.n_rows)

    X = ds.features
    mu = X.mean(axis=0)
    sigma = _column_sigma(X, rule.sigma_mode)

    degenerate = sigma == 0.0
    if degenerate.any():
        names = [ds.column_names[j] for j in np.flatnonzero(degenerate)]
        warnings.warn(
            DegenerateColumnWarning(f"zero-spread columns kept as-is: {names}")
        )

    half_width = rule.k_sigma * sigma
    outside = (X < mu - half_width) | (X > mu + half_width)
    outside[:, degenerate] = False
    removed_mask = outside.any(axis=1)

    removed_indices = np.flatnonzero(removed_mask)
    kept = ds.take_rows(np.flatnonzero(~removed_mask))
    clean = Dataset(
        features=kept.features,
        column_names=ds.column_names,
        labels=kept.labels,
        label_names=ds.label_names,
        provenance="clean",
    )
    return clean, int(removed_indices.size), removed_indices


def fit_minmax(train: Dataset) -> MinMaxParams:
    if train.n_rows == 0:
        raise TooFewRows(1, 0)
    X = train.features
    return MinMaxParams(minimum=X.min(axis=0), maximum=X.max(axis=0))


def apply_minmax(params: MinMaxParams, ds: Dataset) -> Dataset:
    """x' = (x - min) / (max - min); constant columns map to 0."""
    if ds.n_cols != params.n_cols:
        raise ColumnCountMismatch(params.n_cols, ds.n_cols)
    span = params.maximum - params.minimum
    safe_span = np.where(span == 0.0, 1.0, span)
    scaled = (ds.features - params.minimum) / safe_span
    scaled[:, span == 0.0] = 0.0
    return ds.with_features(scaled, ds.column_names, "norm")


def fit_zscore(train: Dataset, sigma_mode: str = "population") -> ZScoreParams:
    if train.n_rows == 0:
        raise TooFewRows(1, 0)
    X = train.features
    return ZScoreParams(mean=X.mean(axis=0), sigma=_column_sigma(X, sigma_mode))


def apply_zscore(params: ZScoreParams, ds: Dataset) -> Dataset:
    """x' = (x - mean) / sigma; zero-sigma columns map to 0."""
    if ds.n_cols != params.n_cols:
        raise ColumnCountMismatch(params.n_cols, ds.n_cols)
    safe_sigma = np.where(params.sigma == 0.0, 1.0, params.sigma)
    scaled = (ds.features - params.mean) / safe_sigma
    scaled[:, params.sigma == 0.0] = 0.0
    return ds.with_features(scaled, ds.column_names, "stand")


def fit_apply_minmax(train: Dataset, apply_to: Dataset):
    """Fit min/max on `train` only, rescale `apply_to` into [0, 1] train-range."""
    params = fit_minmax(train)
    return params, apply_minmax(params, apply_to)


def fit_apply_zscore(train: Dataset, apply_to: Dataset, sigma_mode: str = "population"):
    """Fit mean/sigma on `train` only, standardize `apply_to`."""
    params = fit_zscore(train, sigma_mode)
    return params, apply_zscore(params, apply_to)
