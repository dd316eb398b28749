"""Gaussian naive Bayes with a global variance floor."""

from __future__ import annotations

import numpy as np

from .base import Classifier

VARIANCE_FLOOR = 1e-9  # times the largest per-feature variance of the train set


class GaussianNaiveBayes(Classifier):
    def __init__(self, var_floor=VARIANCE_FLOOR, seed=0):
        super().__init__(seed)
        self.var_floor = float(var_floor)
        self.theta = None  # (C, d) class means
        self.var = None    # (C, d) class variances, floored
        self.log_prior = None

    def _fit(self, X, y):
        C, d = self.class_count, X.shape[1]
        floor = self.var_floor * float(X.var(axis=0).max())
        floor = max(floor, 1e-300)  # all-constant data still needs a density
        theta = np.zeros((C, d))
        var = np.full((C, d), floor)
        priors = np.zeros(C)
        for c in range(C):
            Xc = X[y == c]
            if len(Xc) == 0:
                continue
            theta[c] = Xc.mean(axis=0)
            var[c] = np.maximum(Xc.var(axis=0), floor)
            priors[c] = len(Xc) / len(X)
        self.theta = theta
        self.var = var
        with np.errstate(divide="ignore"):
            self.log_prior = np.where(priors > 0, np.log(np.maximum(priors, 1e-300)), -np.inf)

    def log_posterior(self, X) -> np.ndarray:
        """Unnormalized log p(c | x): log prior + sum of feature log densities."""
        X = np.asarray(X, dtype=np.float64)
        scores = np.empty((len(X), self.class_count))
        for c in range(self.class_count):
            log_det = np.log(2.0 * np.pi * self.var[c]).sum()
            maha = ((X - self.theta[c]) ** 2 / self.var[c]).sum(axis=1)
            scores[:, c] = self.log_prior[c] - 0.5 * (log_det + maha)
        return scores

    def _predict(self, X):
        return self.log_posterior(X).argmax(axis=1)
