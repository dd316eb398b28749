"""k-nearest-neighbor classifier with fully specified tie handling."""

from __future__ import annotations

import numpy as np

from .base import Classifier


class KNearestNeighbors(Classifier):
    """Majority vote among the k Euclidean nearest training points.

    Tie rules, in order: equal distances rank by lower training row index;
    equal vote counts rank by smaller summed distance of the voting
    neighbors; still equal ranks by lower class index.
    """

    def __init__(self, k=5, seed=0):
        super().__init__(seed)
        self.k = int(k)
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.train_X = None
        self.train_y = None

    def _fit(self, X, y):
        self.train_X = X.copy()
        self.train_y = y.copy()
        self._sq_norms = (X * X).sum(axis=1)

    def _predict(self, X):
        k = min(self.k, len(self.train_X))
        out = np.empty(len(X), dtype=np.int64)
        # block the queries so the distance matrix stays small
        block = max(1, int(2_000_000 // max(len(self.train_X), 1)))
        for start in range(0, len(X), block):
            Q = X[start:start + block]
            d2 = (
                (Q * Q).sum(axis=1)[:, None]
                - 2.0 * (Q @ self.train_X.T)
                + self._sq_norms[None, :]
            )
            np.maximum(d2, 0.0, out=d2)
            order = np.argsort(d2, axis=1, kind="stable")[:, :k]
            for i in range(len(Q)):
                idx = order[i]
                out[start + i] = self._vote(self.train_y[idx], np.sqrt(d2[i, idx]))
        return out

    def _vote(self, labels, distances):
        votes = np.bincount(labels, minlength=self.class_count)
        sums = np.zeros(self.class_count)
        np.add.at(sums, labels, distances)
        best = max(
            range(self.class_count),
            key=lambda c: (votes[c], -sums[c], -c),
        )
        return best
