"""Feature extraction: principal components and fixed-point ICA.

PCA keeps the top-m eigenvectors of the sample covariance. ICA is the
symmetric (parallel) fixed-point iteration with the tanh contrast: whiten to
m dimensions, update all rows of W at once, re-orthonormalize with
W <- (W W^T)^(-1/2) W each step, and stop when every row's direction change
drops below tol. Both fits are deterministic for a fixed seed; ICA output
order and signs are canonicalized because the model itself is
permutation/sign ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import BadComponentCount, DimensionMismatch, TooFewRows
from .linalg import covariance_matrix, fix_eigenvector_signs, sym_eigen, whiten


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # (d, m), columns are principal axes
    explained_variance_ratio: np.ndarray
    eigenvalues: np.ndarray  # variances along the kept axes

    @property
    def n_features(self) -> int:
        return self.components.shape[0]

    @property
    def n_components(self) -> int:
        return self.components.shape[1]


@dataclass(frozen=True)
class IcaModel:
    mean: np.ndarray
    unmixing: np.ndarray  # (m, d), maps centered data to components
    iterations_used: int
    converged: bool

    @property
    def n_features(self) -> int:
        return self.unmixing.shape[1]

    @property
    def n_components(self) -> int:
        return self.unmixing.shape[0]


def fit_pca(train: Dataset, m: int = 10) -> PcaModel:
    """Top-m principal axes of the training covariance.

    explained_variance_ratio[i] is eigenvalue i over the sum of all d
    eigenvalues, so the ratios of a truncated basis do not sum to 1.
    """
    d = train.n_cols
    if not 1 <= m <= d:
        raise BadComponentCount(m, d)
    if train.n_rows <= d:
        raise TooFewRows(d + 1, train.n_rows)
    mean = train.features.mean(axis=0)
    eig = sym_eigen(covariance_matrix(train.features))
    lam = np.maximum(eig.eigenvalues, 0.0)  # clip eigensolver noise on tiny modes
    total = float(lam.sum())
    ratios = lam[:m] / total if total > 0 else np.zeros(m)
    return PcaModel(
        mean=mean,
        components=eig.eigenvectors[:, :m].copy(),
        explained_variance_ratio=ratios,
        eigenvalues=eig.eigenvalues[:m].copy(),
    )


def transform_pca(model: PcaModel, ds: Dataset) -> Dataset:
    if ds.n_cols != model.n_features:
        raise DimensionMismatch(model.n_features, ds.n_cols)
    projected = (ds.features - model.mean) @ model.components
    names = [f"PC{i + 1}" for i in range(model.n_components)]
    return ds.with_features(projected, names, "pca")


def _sym_decorrelate(W: np.ndarray) -> np.ndarray:
    """W <- (W W^T)^(-1/2) W, making the rows exactly orthonormal."""
    eig = sym_eigen(W @ W.T)
    lam = np.maximum(eig.eigenvalues, 1e-300)
    V = eig.eigenvectors
    inv_sqrt = (V / np.sqrt(lam)) @ V.T
    return inv_sqrt @ W


def fit_ica(
    train: Dataset,
    m: int = 10,
    seed: int = 0,
    max_iter: int = 200,
    tol: float = 1e-4,
) -> IcaModel:
    """FastICA with the logcosh contrast (g = tanh) in symmetric mode.

    Non-convergence within max_iter is not an error; the model is returned
    with converged=False so callers can decide what to do with it.
    """
    d = train.n_cols
    if not 1 <= m <= d:
        raise BadComponentCount(m, d)
    if train.n_rows <= d:
        raise TooFewRows(d + 1, train.n_rows)

    X = train.features
    mean = X.mean(axis=0)
    Z, K = whiten(X, m)  # raises RankDeficient if m exceeds the data rank
    n = Z.shape[0]

    rng = np.random.default_rng(seed)
    W = _sym_decorrelate(rng.standard_normal((m, m)))

    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        G = np.tanh(Z @ W.T)  # (n, m)
        g_prime_mean = (1.0 - G * G).mean(axis=0)  # (m,)
        W_new = (G.T @ Z) / n - g_prime_mean[:, None] * W
        W_new = _sym_decorrelate(W_new)
        # rows stay unit norm, so |<w_new, w_old>| -> 1 at a fixed point
        drift = float(np.max(np.abs(1.0 - np.abs((W_new * W).sum(axis=1)))))
        W = W_new
        if drift < tol:
            converged = True
            break

    unmixing = W @ K  # (m, d) on centered, unwhitened data
    unmixing = _canonical_order(unmixing, X - mean)
    return IcaModel(
        mean=mean,
        unmixing=unmixing,
        iterations_used=iterations,
        converged=converged,
    )


def _canonical_order(unmixing: np.ndarray, centered: np.ndarray) -> np.ndarray:
    """Sort components by descending variance of the direction-normalized
    projection, then make each row's largest-magnitude entry positive."""
    norms = np.sqrt((unmixing * unmixing).sum(axis=1))
    norms = np.where(norms == 0.0, 1.0, norms)
    projections = centered @ (unmixing / norms[:, None]).T
    variances = projections.var(axis=0)
    order = np.argsort(-variances, kind="stable")
    return fix_eigenvector_signs(unmixing[order].T).T


def transform_ica(model: IcaModel, ds: Dataset) -> Dataset:
    if ds.n_cols != model.n_features:
        raise DimensionMismatch(model.n_features, ds.n_cols)
    components = (ds.features - model.mean) @ model.unmixing.T
    names = [f"IC{i + 1}" for i in range(model.n_components)]
    return ds.with_features(components, names, "ica")


def reconstruction_error(model: PcaModel, ds: Dataset) -> float:
    """Frobenius norm of X - (projection mapped back), relative to ||X - mean||."""
    centered = ds.features - model.mean
    approx = (centered @ model.components) @ model.components.T
    denom = float(np.sqrt((centered * centered).sum()))
    if denom == 0.0:
        return 0.0
    return float(np.sqrt(((centered - approx) ** 2).sum())) / denom
