"""Shared classifier contract: fit/predict on integer-labeled matrices.

Every model validates the same preconditions (two or more classes, finite
values, matching feature count) and is deterministic given its seed. Ties of
any kind resolve to the lowest class index.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, NonFiniteInput, SingleClassTraining


class Classifier:
    """Base class holding the common validation; subclasses implement
    _fit(X, y) and _predict(X)."""

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self.class_count = 0
        self.n_features = 0
        self._fitted = False

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2:
            raise DimensionMismatch("2-D matrix", X.ndim)
        if y.shape != (X.shape[0],):
            raise DimensionMismatch(X.shape[0], y.shape)
        if not np.isfinite(X).all():
            raise NonFiniteInput("training features")
        classes = np.unique(y)
        if classes.size < 2:
            raise SingleClassTraining()
        self.class_count = int(classes.max()) + 1
        self.n_features = X.shape[1]
        self._fit(X, y)
        self._fitted = True
        return self

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if not self._fitted:
            raise RuntimeError("predict called before fit")
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(self.n_features, X.shape[1] if X.ndim == 2 else X.shape)
        if not np.isfinite(X).all():
            raise NonFiniteInput("prediction features")
        return self._predict(X)

    def _fit(self, X, y):
        raise NotImplementedError

    def _predict(self, X) -> np.ndarray:
        raise NotImplementedError
