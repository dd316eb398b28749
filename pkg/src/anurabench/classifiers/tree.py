"""CART-style binary decision tree minimizing weighted Gini impurity."""

from __future__ import annotations

import numpy as np

from .base import Classifier


class TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "prediction")

    def __init__(self, feature=-1, threshold=0.0, left=None, right=None, prediction=-1):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.prediction = prediction

    @property
    def is_leaf(self):
        return self.feature < 0


def _gini_from_counts(counts: np.ndarray, total: int) -> float:
    if total == 0:
        return 0.0
    p = counts / total
    return 1.0 - float((p * p).sum())


class DecisionTree(Classifier):
    """Greedy binary splits on midpoint thresholds of consecutive distinct
    sorted values. Growth stops at purity, fewer than min_samples_split
    samples, the depth limit, or when no split improves impurity. Among
    equally good splits the lowest feature index wins, then the lowest
    threshold.
    """

    def __init__(self, max_depth=None, min_samples_split=2, seed=0):
        super().__init__(seed)
        self.max_depth = None if max_depth is None else int(max_depth)
        self.min_samples_split = int(min_samples_split)
        self.root = None
        self.node_count = 0

    def _fit(self, X, y):
        self.node_count = 0
        self.root = self._grow(X, y, depth=0)

    def _grow(self, X, y, depth) -> TreeNode:
        self.node_count += 1
        counts = np.bincount(y, minlength=self.class_count)
        majority = int(counts.argmax())  # argmax ties to the lower class index
        n = len(y)

        pure = counts.max() == n
        depth_capped = self.max_depth is not None and depth >= self.max_depth
        if pure or n < self.min_samples_split or depth_capped:
            return TreeNode(prediction=majority)

        parent_gini = _gini_from_counts(counts, n)
        feature, threshold, child_impurity = self._best_split(X, y, counts)
        if feature < 0 or parent_gini - child_impurity <= 0.0:
            return TreeNode(prediction=majority)

        mask = X[:, feature] <= threshold
        left = self._grow(X[mask], y[mask], depth + 1)
        right = self._grow(X[~mask], y[~mask], depth + 1)
        return TreeNode(feature=feature, threshold=threshold, left=left, right=right,
                        prediction=majority)

    def _best_split(self, X, y, counts):
        """Scan every feature; returns (feature, threshold, weighted gini),
        or feature -1 when no candidate threshold exists."""
        n = len(y)
        best = (-1, 0.0, np.inf)
        total = counts.astype(np.float64)
        for j in range(X.shape[1]):
            col = X[:, j]
            order = np.argsort(col, kind="stable")
            sorted_vals = col[order]
            cuts = np.flatnonzero(sorted_vals[:-1] < sorted_vals[1:])
            if cuts.size == 0:
                continue
            onehot = np.zeros((n, self.class_count))
            onehot[np.arange(n), y[order]] = 1.0
            left_counts = onehot.cumsum(axis=0)[cuts]  # counts with value <= cut
            n_left = (cuts + 1).astype(np.float64)
            n_right = n - n_left
            right_counts = total[None, :] - left_counts
            gini_left = 1.0 - (left_counts * left_counts).sum(axis=1) / (n_left * n_left)
            gini_right = 1.0 - (right_counts * right_counts).sum(axis=1) / (n_right * n_right)
            weighted = (n_left * gini_left + n_right * gini_right) / n
            pos = int(weighted.argmin())  # argmin ties to the lowest threshold
            if weighted[pos] < best[2]:
                midpoint = (sorted_vals[cuts[pos]] + sorted_vals[cuts[pos] + 1]) / 2.0
                best = (j, float(midpoint), float(weighted[pos]))
        return best

    def _predict(self, X):
        out = np.empty(len(X), dtype=np.int64)
        for i, row in enumerate(X):
            node = self.root
            while not node.is_leaf:
                node = node.left if row[node.feature] <= node.threshold else node.right
            out[i] = node.prediction
        return out

    def depth(self) -> int:
        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))
        return walk(self.root) if self.root else 0
