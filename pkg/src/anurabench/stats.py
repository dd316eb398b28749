"""Descriptive statistics and the attribute correlation matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import PipelineError, TooFewRows


@dataclass(frozen=True)
class ColumnSummary:
    name: str
    count: int
    mean: float
    sigma: float  # population standard deviation
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float


@dataclass(frozen=True)
class CorrelationMatrix:
    values: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "column_names", tuple(self.column_names))

    def lookup(self, name_a: str, name_b: str) -> float:
        i = self.column_names.index(name_a)
        j = self.column_names.index(name_b)
        return float(self.values[i, j])


def describe(ds: Dataset) -> list[ColumnSummary]:
    """Per-column summary; quartiles use linear interpolation between ranks."""
    if ds.n_rows == 0:
        raise PipelineError("cannot describe an empty dataset")
    X = ds.features
    q1, med, q3 = np.quantile(X, [0.25, 0.5, 0.75], axis=0)
    means = X.mean(axis=0)
    sigmas = X.std(axis=0)
    mins = X.min(axis=0)
    maxs = X.max(axis=0)
    return [
        ColumnSummary(
            name=ds.column_names[j],
            count=ds.n_rows,
            mean=float(means[j]),
            sigma=float(sigmas[j]),
            minimum=float(mins[j]),
            q1=float(q1[j]),
            median=float(med[j]),
            q3=float(q3[j]),
            maximum=float(maxs[j]),
        )
        for j in range(ds.n_cols)
    ]


def correlation_matrix(ds: Dataset) -> CorrelationMatrix:
    """Pearson r for every column pair.

    Constant columns correlate 0 with everything else and 1 with themselves,
    so degenerate inputs stay representable instead of going NaN.
    """
    if ds.n_rows < 2:
        raise TooFewRows(2, ds.n_rows)
    X = ds.features
    centered = X - X.mean(axis=0)
    norms = np.sqrt((centered * centered).sum(axis=0))
    constant = norms == 0.0
    safe = np.where(constant, 1.0, norms)
    unit = centered / safe
    r = unit.T @ unit
    r[constant, :] = 0.0
    r[:, constant] = 0.0
    np.fill_diagonal(r, 1.0)
    np.clip(r, -1.0, 1.0, out=r)
    # exact symmetry despite float summation order
    r = (r + r.T) / 2.0
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(values=r, column_names=ds.column_names)
