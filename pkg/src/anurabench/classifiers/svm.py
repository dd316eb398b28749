"""Soft-margin RBF support vector machine trained by simplified SMO.

Each binary subproblem keeps the full error cache E = f(x) - y as a vector
and repairs it in O(n) after every accepted pair update, so a pass over the
data costs O(n) scalar work plus O(n) per successful update. Multiclass is
one-vs-one with majority voting.

The partner index of each working pair comes from an inline 31-bit LCG
rather than a library generator so the hot loop stays compilable: when numba
is importable the loop runs jitted, otherwise the same function runs as
plain Python, and both produce bit-identical models.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier

MIN_ALPHA_STEP = 1e-5  # pair updates smaller than this count as no change

_LCG_MULT = 1103515245
_LCG_INC = 12345
_LCG_MOD = 2 ** 31


def _smo_loop(K, y, C, tol, quiet_passes, seed):
    """Sequential simplified-SMO passes over a precomputed kernel matrix.

    Returns (alpha, b). Stops after `quiet_passes` consecutive passes in
    which no alpha moved by at least MIN_ALPHA_STEP.
    """
    n = K.shape[0]
    alpha = np.zeros(n)
    E = -y.copy()  # f(x) - y with all alphas and b at zero
    b = 0.0
    state = seed % _LCG_MOD
    quiet = 0
    while quiet < quiet_passes:
        changed = 0
        for i in range(n):
            Ei = E[i]
            yEi = y[i] * Ei
            if not ((yEi < -tol and alpha[i] < C) or (yEi > tol and alpha[i] > 0.0)):
                continue
            state = (_LCG_MULT * state + _LCG_INC) % _LCG_MOD
            j = (state >> 8) % (n - 1)
            if j >= i:
                j += 1
            Ej = E[j]
            ai_old = alpha[i]
            aj_old = alpha[j]
            if y[i] != y[j]:
                L = max(0.0, aj_old - ai_old)
                H = min(C, C + aj_old - ai_old)
            else:
                L = max(0.0, ai_old + aj_old - C)
                H = min(C, ai_old + aj_old)
            if L == H:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= 0.0:
                continue
            aj = aj_old - y[j] * (Ei - Ej) / eta
            aj = min(H, max(L, aj))
            if abs(aj - aj_old) < MIN_ALPHA_STEP:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)

            di = y[i] * (ai - ai_old)
            dj = y[j] * (aj - aj_old)
            b1 = b - Ei - di * K[i, i] - dj * K[i, j]
            b2 = b - Ej - di * K[i, j] - dj * K[j, j]
            if 0.0 < ai < C:
                new_b = b1
            elif 0.0 < aj < C:
                new_b = b2
            else:
                new_b = (b1 + b2) / 2.0
            E += di * K[i] + dj * K[j] + (new_b - b)
            alpha[i] = ai
            alpha[j] = aj
            b = new_b
            changed += 1
        quiet = quiet + 1 if changed == 0 else 0
    return alpha, b


try:  # optional acceleration; results are identical either way
    from numba import njit

    _smo_loop_fast = njit(cache=True, fastmath=False)(_smo_loop)
except Exception:  # pragma: no cover - numba simply not installed
    _smo_loop_fast = _smo_loop


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = (
        (A * A).sum(axis=1)[:, None]
        - 2.0 * (A @ B.T)
        + (B * B).sum(axis=1)[None, :]
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def scale_gamma(X: np.ndarray) -> float:
    """gamma = 1 / (d * mean of per-feature population variances)."""
    d = X.shape[1]
    var = float(X.var(axis=0).mean())
    if var <= 0.0:
        return 1.0
    return 1.0 / (d * var)


def problem_seed(seed: int, a: int, b: int) -> int:
    return (seed * 1_000_003 + a * 1009 + b * 31 + 7) % _LCG_MOD


class BinarySmo:
    """Simplified SMO for labels in {-1, +1}."""

    def __init__(self, C=1.0, tol=1e-3, quiet_passes=5):
        self.C = float(C)
        self.tol = float(tol)
        self.quiet_passes = int(quiet_passes)
        self.alpha = None
        self.b = 0.0
        self.support_X = None
        self.support_ay = None
        self.gamma = None

    def fit(self, X, y, gamma, seed=0):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.float64)
        K = rbf_kernel(X, X, gamma)
        alpha, b = _smo_loop_fast(K, y, self.C, self.tol, self.quiet_passes, int(seed))
        self.alpha = alpha
        self.b = float(b)
        self.gamma = gamma
        keep = alpha > 0.0
        self.support_X = X[keep].copy()
        self.support_ay = (alpha[keep] * y[keep]).copy()
        return self

    def decision(self, X) -> np.ndarray:
        if len(self.support_X) == 0:
            return np.full(len(X), self.b)
        K = rbf_kernel(np.asarray(X, dtype=np.float64), self.support_X, self.gamma)
        return K @ self.support_ay + self.b


class SupportVectorMachine(Classifier):
    """One-vs-one RBF SVM: one BinarySmo per class pair, majority vote,
    vote ties to the lower class index."""

    def __init__(self, C=1.0, gamma="scale", tol=1e-3, quiet_passes=5, seed=0):
        super().__init__(seed)
        self.C = float(C)
        self.gamma = gamma
        self.tol = float(tol)
        self.quiet_passes = int(quiet_passes)
        self.problems = []  # [(class_a, class_b, BinarySmo), ...]
        self.gamma_value = None

    def _fit(self, X, y):
        gamma = scale_gamma(X) if self.gamma == "scale" else float(self.gamma)
        self.gamma_value = gamma
        present = [c for c in range(self.class_count) if np.any(y == c)]
        self.problems = []
        for ai in range(len(present)):
            for bi in range(ai + 1, len(present)):
                a, b = present[ai], present[bi]
                mask = (y == a) | (y == b)
                Xp = X[mask]
                # +1 for the lower class index, -1 for the higher
                yp = np.where(y[mask] == a, 1.0, -1.0)
                smo = BinarySmo(C=self.C, tol=self.tol, quiet_passes=self.quiet_passes)
                smo.fit(Xp, yp, gamma, seed=problem_seed(self.seed, a, b))
                self.problems.append((a, b, smo))

    def _predict(self, X):
        votes = np.zeros((len(X), self.class_count), dtype=np.int64)
        for a, b, smo in self.problems:
            scores = smo.decision(X)
            votes[scores > 0.0, a] += 1
            votes[scores <= 0.0, b] += 1
        return votes.argmax(axis=1)
