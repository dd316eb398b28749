"""CSV ingestion into a typed, immutable dataset.

The expected input is the Anuran Calls (MFCCs) table: one row per call
syllable, 22 numeric MFCC columns, a species column used as the label, and
bookkeeping columns (Family, Genus, RecordID) that are dropped by default.
Any CSV with the same shape conventions loads the same way.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import (
    MissingFile,
    MissingLabelColumn,
    NonNumericCell,
    PipelineError,
    RaggedRow,
)

PROVENANCES = ("raw", "clean", "norm", "stand", "pca", "ica")


@dataclass(frozen=True)
class SchemaConfig:
    """How to interpret the CSV columns."""

    label_column: str = "Species"
    drop_columns: tuple[str, ...] = ("Family", "Genus", "RecordID")
    delimiter: str = ","
    has_header: bool = True

    def __post_init__(self):
        object.__setattr__(self, "drop_columns", tuple(self.drop_columns))
        if self.label_column in self.drop_columns:
            raise PipelineError(
                f"label column {self.label_column!r} cannot also be dropped"
            )


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix plus integer class labels.

    features: (n, d) float64 matrix, one row per instance.
    column_names: d feature names.
    labels: (n,) int64 class indices, 0-based.
    label_names: display name per class index, in first-appearance order.
    provenance: which data form this is ("raw", "clean", "norm", ...).
    """

    features: np.ndarray
    column_names: tuple[str, ...]
    labels: np.ndarray
    label_names: tuple[str, ...]
    provenance: str = "raw"

    def __post_init__(self):
        # private copies so freezing them cannot affect caller-owned arrays
        feats = np.array(self.features, dtype=np.float64, order="C")
        labels = np.array(self.labels, dtype=np.int64)
        feats.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "label_names", tuple(self.label_names))
        if feats.ndim != 2:
            raise PipelineError(f"features must be 2-D, got shape {feats.shape}")
        if labels.shape != (feats.shape[0],):
            raise PipelineError(
                f"label count {labels.shape} does not match {feats.shape[0]} rows"
            )
        if len(self.column_names) != feats.shape[1]:
            raise PipelineError(
                f"{len(self.column_names)} column names for {feats.shape[1]} columns"
            )
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.label_names)):
            raise PipelineError("label index outside label_names range")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_cols(self) -> int:
        return self.features.shape[1]

    @property
    def class_count(self) -> int:
        return len(self.label_names)

    def validate(self) -> "Dataset":
        """Check the no-missing/no-infinite invariant; returns self when clean."""
        if not np.isfinite(self.features).all():
            bad = int(np.count_nonzero(~np.isfinite(self.features)))
            raise PipelineError(f"{bad} non-finite feature cells present")
        return self

    def take_rows(self, indices) -> "Dataset":
        """New Dataset restricted to the given row indices (same provenance)."""
        idx = np.asarray(indices, dtype=np.int64)
        return replace(self, features=self.features[idx], labels=self.labels[idx])

    def with_features(self, features, column_names, provenance) -> "Dataset":
        """New Dataset with a replaced feature matrix (labels carried over)."""
        return Dataset(
            features=features,
            column_names=tuple(column_names),
            labels=self.labels,
            label_names=self.label_names,
            provenance=provenance,
        )


def _canonical_name(name: str) -> str:
    # the UCI header contains names like "MFCCs_ 1"; spaces are never meaningful
    return name.strip().replace(" ", "")


def _parse_cell(text: str, row: int, column: str) -> float:
    stripped = text.strip()
    if not stripped:
        return float("nan")
    try:
        return float(stripped)
    except ValueError:
        raise NonNumericCell(row, column, text) from None


def load_csv(path, schema: SchemaConfig = SchemaConfig()) -> Dataset:
    """Load a delimited text file into a Dataset with provenance "raw".

    Feature columns are every non-dropped, non-label column. Labels are
    encoded in first-appearance order of the class strings. Empty cells
    parse to NaN and are reported by audit_missing rather than raising.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=schema.delimiter)
        rows = list(reader)
    rows = [r for r in rows if r]  # drop fully empty lines

    if not rows:
        raise PipelineError(f"empty input file: {path}")

    if schema.has_header:
        header = [_canonical_name(c) for c in rows[0]]
        data_rows = rows[1:]
    else:
        header = [f"col{i}" for i in range(len(rows[0]))]
        data_rows = rows

    label_canon = _canonical_name(schema.label_column)
    drop_canon = {_canonical_name(c) for c in schema.drop_columns}
    if label_canon not in header:
        raise MissingLabelColumn(schema.label_column, header)

    label_idx = header.index(label_canon)
    feature_idx = [
        i for i, name in enumerate(header)
        if i != label_idx and name not in drop_canon
    ]
    column_names = [header[i] for i in feature_idx]
    width = len(header)

    features = np.empty((len(data_rows), len(feature_idx)), dtype=np.float64)
    labels = np.empty(len(data_rows), dtype=np.int64)
    label_names: list[str] = []
    label_codes: dict[str, int] = {}

    for r, fields in enumerate(data_rows, start=1):
        if len(fields) != width:
            raise RaggedRow(r, width, len(fields))
        for j, i in enumerate(feature_idx):
            features[r - 1, j] = _parse_cell(fields[i], r, header[i])
        name = fields[label_idx].strip()
        code = label_codes.get(name)
        if code is None:
            code = len(label_names)
            label_codes[name] = code
            label_names.append(name)
        labels[r - 1] = code

    return Dataset(
        features=features,
        column_names=tuple(column_names),
        labels=labels,
        label_names=tuple(label_names),
        provenance="raw",
    )


def audit_missing(ds: Dataset) -> int:
    """Number of cells that were empty or unparseable (stored as NaN)."""
    return int(np.count_nonzero(np.isnan(ds.features)))


def write_csv(ds: Dataset, path, label_column: str = "Species") -> None:
    """Write the dataset as round-trippable CSV: header row, feature columns
    in order, label names in a final column, shortest exact decimal text."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.column_names) + [label_column])
        for row, code in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [ds.label_names[code]])
