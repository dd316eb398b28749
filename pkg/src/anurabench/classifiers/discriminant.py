"""Linear discriminant analysis with a pooled within-class covariance."""

from __future__ import annotations

import numpy as np

from ..linalg import spd_inverse
from .base import Classifier

RIDGE = 1e-6  # times trace/d, added to the pooled covariance diagonal


class LinearDiscriminant(Classifier):
    """Gaussian classes with a shared covariance; the decision function is
    delta_c(x) = x^T S^-1 mu_c - 0.5 mu_c^T S^-1 mu_c + log prior_c."""

    def __init__(self, seed=0):
        super().__init__(seed)
        self.means = None
        self.coef = None
        self.intercept = None

    def _fit(self, X, y):
        n, d = X.shape
        C = self.class_count
        means = np.zeros((C, d))
        priors = np.zeros(C)
        pooled = np.zeros((d, d))
        seen = 0
        for c in range(C):
            Xc = X[y == c]
            if len(Xc) == 0:
                means[c] = 0.0
                priors[c] = 0.0
                continue
            means[c] = Xc.mean(axis=0)
            priors[c] = len(Xc) / n
            dev = Xc - means[c]
            pooled += dev.T @ dev
            seen += 1
        pooled /= max(n - seen, 1)
        pooled += (RIDGE * np.trace(pooled) / d) * np.eye(d)

        inv = spd_inverse(pooled)
        self.means = means
        self.coef = means @ inv  # (C, d)
        with np.errstate(divide="ignore"):
            log_prior = np.where(priors > 0, np.log(np.maximum(priors, 1e-300)), -np.inf)
        self.intercept = -0.5 * (self.coef * means).sum(axis=1) + log_prior

    def discriminants(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.coef.T + self.intercept

    def _predict(self, X):
        return self.discriminants(X).argmax(axis=1)
