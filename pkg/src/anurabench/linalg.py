"""Numeric kernels: sample covariance, symmetric eigendecomposition by cyclic
Jacobi rotations, and covariance whitening.

The Jacobi route is chosen over QR iteration deliberately: at 22 attributes
speed is irrelevant, the rotations are unconditionally stable on symmetric
input, and every step is easy to audit. Determinism is part of the contract;
identical input bytes produce identical output bytes, including eigenvector
signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotSymmetric, RankDeficient, TooFewRows

MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-12  # times the Frobenius norm of the input
SYMMETRY_TOL = 1e-10  # relative
RANK_CUT = 1e-12  # eigenvalues below RANK_CUT * lambda_max are discarded


@dataclass(frozen=True)
class SymEigen:
    """Eigenvalues sorted descending; eigenvectors as orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def covariance_matrix(X: np.ndarray, centered: bool = False) -> np.ndarray:
    """Sample covariance (divisor n - 1) of the columns of X.

    With centered=True the caller asserts the columns already have zero mean
    and the centering pass is skipped.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise TooFewRows(2, n)
    if not centered:
        X = X - X.mean(axis=0)
    C = (X.T @ X) / (n - 1)
    return (C + C.T) / 2.0


def _offdiag_norm(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt((off * off).sum()))


def fix_eigenvector_signs(V: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's largest-magnitude entry is positive."""
    V = V.copy()
    lead = np.abs(V).argmax(axis=0)
    for j in range(V.shape[1]):
        if V[lead[j], j] < 0:
            V[:, j] = -V[:, j]
    return V


def sym_eigen(A: np.ndarray) -> SymEigen:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Sweeps rotate every (p, q) pair in fixed order until the off-diagonal
    Frobenius norm drops below OFFDIAG_TOL * ||A||_F, raising NoConvergence
    after MAX_SWEEPS. Eigenvalues come back sorted descending with a fixed
    sign convention on the eigenvectors.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric(float("inf"))
    d = A.shape[0]
    norm = float(np.sqrt((A * A).sum()))
    if norm > 0:
        deviation = float(np.abs(A - A.T).max()) / norm
        if deviation > SYMMETRY_TOL:
            raise NotSymmetric(deviation)

    work = (A + A.T) / 2.0
    V = np.eye(d)
    if d == 1 or norm == 0.0:
        return _finish(work, V)

    threshold = OFFDIAG_TOL * norm
    for _ in range(MAX_SWEEPS):
        if _offdiag_norm(work) < threshold:
            return _finish(work, V)
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = work[p, q]
                if apq == 0.0:
                    continue
                # skip rotations that cannot move the off-diagonal norm
                if abs(apq) < 1e-20 * norm:
                    work[p, q] = work[q, p] = 0.0
                    continue
                theta = (work[q, q] - work[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = work[:, p].copy()
                col_q = work[:, q].copy()
                work[:, p] = c * col_p - s * col_q
                work[:, q] = s * col_p + c * col_q
                row_p = work[p, :].copy()
                row_q = work[q, :].copy()
                work[p, :] = c * row_p - s * row_q
                work[q, :] = s * row_p + c * row_q
                work[p, q] = work[q, p] = 0.0

                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    if _offdiag_norm(work) < threshold:
        return _finish(work, V)
    raise NoConvergence(MAX_SWEEPS)


def _finish(work: np.ndarray, V: np.ndarray) -> SymEigen:
    eigenvalues = np.diag(work).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = fix_eigenvector_signs(V[:, order])
    eigenvalues.flags.writeable = False
    V.flags.writeable = False
    return SymEigen(eigenvalues=eigenvalues, eigenvectors=V)


def whiten(X: np.ndarray, n_components: int | None = None):
    """Center the columns of X and map them to unit covariance.

    Returns (whitened matrix, map) where map = diag(lambda^-1/2) V^T built
    from the eigendecomposition of the sample covariance. Eigenvalues below
    RANK_CUT * lambda_max are dropped; if fewer directions survive than
    n_components requests, RankDeficient is raised.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if n <= d:
        raise TooFewRows(d + 1, n)
    Xc = X - X.mean(axis=0)
    eig = sym_eigen(covariance_matrix(Xc, centered=True))
    lam = eig.eigenvalues
    lam_max = float(lam[0]) if lam.size else 0.0
    keep = lam > RANK_CUT * lam_max if lam_max > 0 else np.zeros(lam.shape, dtype=bool)
    available = int(keep.sum())
    wanted = available if n_components is None else int(n_components)
    if wanted > available or wanted < 1:
        raise RankDeficient(wanted, available)
    scale = 1.0 / np.sqrt(lam[:wanted])
    mapping = scale[:, None] * eig.eigenvectors[:, :wanted].T
    return Xc @ mapping.T, mapping


def spd_inverse(A: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via sym_eigen."""
    eig = sym_eigen(A)
    lam = np.maximum(eig.eigenvalues, np.finfo(np.float64).tiny)
    V = eig.eigenvectors
    return (V / lam) @ V.T
