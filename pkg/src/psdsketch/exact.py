"""Ground-truth computations by full eigendecomposition.

This module is the deliberately slow exact baseline: every sampled algorithm
in the package is accepted against the quantities computed here. All
functions are pure and operate on plain matrices, not oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    NotPsdError,
    PsdMatrix,
    SingularMatrixError,
    ValidationError,
)

# Singular values / eigenvalues below PINV_RTOL * largest are treated as zero
# wherever a pseudoinverse is required.
PINV_RTOL = 1e-10


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns are the orthonormal basis

    def reconstruct(self) -> np.ndarray:
        u, lam = self.eigenvectors, self.eigenvalues
        return (u * lam) @ u.T


def eig_psd(a: PsdMatrix) -> SpectralData:
    """Full eigendecomposition with descending eigenvalues.

    Tiny negative eigenvalues (within -1e-8 of the top one) are clamped to
    zero so downstream square roots are well defined.
    """
    if not np.isfinite(a.values).all():
        raise ValidationError("matrix entries must be finite")
    lam, u = np.linalg.eigh(a.values)
    lam, u = lam[::-1].copy(), u[:, ::-1].copy()
    top = max(lam[0], 0.0)
    lam[(lam < 0) & (lam >= -1e-8 * max(top, 1.0))] = 0.0
    return SpectralData(lam, u)


def matrix_sqrt(a: PsdMatrix) -> PsdMatrix:
    """Symmetric PSD square root U sqrt(L) U^T."""
    sd = eig_psd(a)
    lam = sd.eigenvalues
    top = max(lam[0], 0.0)
    if (lam < -1e-6 * max(top, 1.0)).any():
        raise NotPsdError(f"matrix is not PSD: min eigenvalue {lam.min():g}")
    root = np.sqrt(np.clip(lam, 0.0, None))
    return PsdMatrix.from_dense((sd.eigenvectors * root) @ sd.eigenvectors.T)


def frob_sq(m: np.ndarray) -> float:
    return float(np.sum(m * m))


def spec_norm_sq(m: np.ndarray) -> float:
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[0] ** 2) if len(s) else 0.0


def best_rank_k(a: PsdMatrix, k: int):
    """Best rank-k approximation of a PSD matrix and its exact tails.

    Returns ``(factor, frob_tail_sq, spec_tail_sq)`` where the tails are
    computed from the spectrum: sum of squared trailing eigenvalues and the
    squared (k+1)-th eigenvalue. The factor reconstructs U_k L_k U_k^T.
    """
    from .lowrank import LowRankFactor

    n = a.n
    if not (1 <= k < n):
        raise ValidationError(f"rank k={k} out of range for n={n}")
    sd = eig_psd(a)
    lam = np.clip(sd.eigenvalues, 0.0, None)
    uk = sd.eigenvectors[:, :k]
    left = uk * lam[:k]
    frob_tail = float(np.sum(lam[k:] ** 2))
    spec_tail = float(lam[k] ** 2)
    return LowRankFactor(left=left, right=uk, symmetric_psd=False), frob_tail, spec_tail


def _ridge_scores_from_svd(v: np.ndarray, sig: np.ndarray, k: int) -> np.ndarray:
    """Column ridge leverage scores from an SVD A = U diag(sig) V^T.

    Score i is sum_j V[i,j]^2 * sig_j^2 / (sig_j^2 + tail/k) with
    tail = sum of squared singular values past k; the zero-tail case falls
    back to the pseudoinverse (plain leverage scores).
    """
    sig2 = sig**2
    tail = float(np.sum(sig2[k:]))
    ridge = tail / k
    if ridge <= PINV_RTOL * max(sig2[0] if len(sig2) else 0.0, 1e-300):
        cut = PINV_RTOL * (sig[0] if len(sig) else 0.0)
        live = sig > cut
        return np.sum(v[:, live] ** 2, axis=1)
    return np.sum(v**2 * (sig2 / (sig2 + ridge)), axis=1)


def exact_ridge_scores(a: np.ndarray, k: int) -> np.ndarray:
    """Rank-k column ridge leverage scores of a general matrix.

    Score i is a_i^T (A A^T + (||A - A_k||_F^2 / k) I)^+ a_i, evaluated
    through the SVD. Scores lie in (0, 1] and sum to at most 2k.
    """
    a = np.asarray(a, dtype=np.float64)
    if not (1 <= k <= min(a.shape)):
        raise ValidationError(f"rank k={k} out of range for shape {a.shape}")
    _, sig, vt = np.linalg.svd(a, full_matrices=False)
    return np.clip(_ridge_scores_from_svd(vt.T, sig, k), 0.0, 1.0)


def exact_sqrt_ridge_scores(a: PsdMatrix, k: int) -> np.ndarray:
    """Rank-k column ridge leverage scores of sqrt(A), from A's spectrum.

    With A = U diag(lam) U^T, score i is
    sum_j U[i,j]^2 * lam_j / (lam_j + (sum_{j>k} lam_j) / k).
    """
    if not (1 <= k < a.n):
        raise ValidationError(f"rank k={k} out of range for n={a.n}")
    sd = eig_psd(a)
    lam = np.clip(sd.eigenvalues, 0.0, None)
    return np.clip(
        _ridge_scores_from_svd(sd.eigenvectors, np.sqrt(lam), k), 0.0, 1.0
    )


def exact_statistical_dimension(a: PsdMatrix, lam: float) -> float:
    """Effective degrees of freedom sum_i lam_i^2 / (lam_i^2 + lam)."""
    if lam < 0:
        raise ValidationError("regularization must be nonnegative")
    ev = np.clip(eig_psd(a).eigenvalues, 0.0, None)
    if lam == 0.0:
        if ev[-1] <= PINV_RTOL * max(ev[0], 1e-300):
            raise SingularMatrixError("lambda = 0 requires a nonsingular matrix")
        return float(a.n)
    ev2 = ev**2
    return float(np.sum(ev2 / (ev2 + lam)))


def exact_ridge_regression(a: PsdMatrix, y: np.ndarray, lam: float
                           ) -> tuple[np.ndarray, float]:
    """Exact minimizer of ||A x - y||^2 + lam ||x||^2 for symmetric A.

    Solves x = (A^2 + lam I)^{-1} A y through the eigendecomposition and
    returns the attained objective value.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (a.n,):
        raise ValidationError(f"y must have shape ({a.n},)")
    if lam < 0:
        raise ValidationError("regularization must be nonnegative")
    sd = eig_psd(a)
    ev = sd.eigenvalues
    denom = ev**2 + lam
    if denom.min() <= PINV_RTOL * max(denom.max(), 1e-300):
        raise SingularMatrixError("A^2 + lam I is singular")
    z = sd.eigenvectors.T @ y
    x = sd.eigenvectors @ (ev / denom * z)
    r = a.values @ x - y
    objective = float(r @ r + lam * (x @ x))
    return x, objective


def ridge_objective(a: PsdMatrix, y: np.ndarray, lam: float, x: np.ndarray) -> float:
    r = a.values @ x - y
    return float(r @ r + lam * (x @ x))
