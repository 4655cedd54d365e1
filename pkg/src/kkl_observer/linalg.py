"""Dense complex linear-algebra kernel shared by the fitting modules.

Backed by numpy/scipy LAPACK wrappers; the contracts below (phase rule,
residual bounds, error classes) are what the rest of the package relies on,
independent of backend.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import EigensolverError, NotPositiveDefiniteError, RankDeficiencyError


def symmetrize(H: np.ndarray) -> np.ndarray:
    """Nearest Hermitian matrix (H + H*)/2."""
    H = np.asarray(H)
    return 0.5 * (H + H.conj().T)


def hermitian_min_eigvec(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of a Hermitian matrix and a unit eigenvector.

    The input is symmetrized before decomposition. The eigenvector phase is
    fixed so its largest-magnitude component is real and positive, which
    makes the result deterministic across backends.
    """
    Hs = symmetrize(np.asarray(H, dtype=complex))
    try:
        w, V = np.linalg.eigh(Hs)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigendecomposition failed: {exc}") from exc
    lam = float(w[0])
    v = V[:, 0].astype(complex)
    i = int(np.argmax(np.abs(v)))
    phase = v[i] / abs(v[i])
    v = v * np.conj(phase)

    scale = np.linalg.norm(Hs)
    residual = np.linalg.norm(Hs @ v - lam * v)
    if residual > 1e-9 * max(scale, 1e-300):
        raise EigensolverError(
            f"eigenpair residual {residual:.3e} exceeds 1e-9 * ||H|| = {1e-9 * scale:.3e}"
        )
    return lam, v


def hermitian_eigenvalues(H: np.ndarray) -> np.ndarray:
    """Full ascending spectrum of a Hermitian matrix (symmetrized first)."""
    return np.linalg.eigvalsh(symmetrize(np.asarray(H, dtype=complex)))


def complex_least_squares(V: np.ndarray, t: np.ndarray, ridge: float = 1e-10) -> np.ndarray:
    """Regularized complex least squares ``min_b ||V b - t||^2`` via normal equations.

    The normal matrix is equilibrated to unit diagonal before factorization
    and the ridge is applied at that scale: a scale-free ridge is what
    actually controls near rank deficiency when column norms differ by
    orders of magnitude. With ridge = 0 the solution is the plain
    least-squares minimizer; a singular normal matrix then raises
    RankDeficiencyError.
    """
    V = np.asarray(V, dtype=complex)
    t = np.asarray(t)
    if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
        raise ValueError("V must be a d x p matrix with d, p >= 1")
    A = symmetrize(V.conj().T @ V)
    scale = np.sqrt(np.real(np.diag(A)))
    scale[scale == 0.0] = 1.0
    A = A / np.outer(scale, scale)
    if ridge:
        A = A + ridge * np.eye(A.shape[0])
    rhs = (V.conj().T @ t) / scale
    try:
        factor = scipy.linalg.cho_factor(A, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise RankDeficiencyError(
            "normal matrix is singular; pass ridge > 0 to regularize"
        ) from exc
    return scipy.linalg.cho_solve(factor, rhs) / scale


def spd_solve(Q: np.ndarray, rhs: np.ndarray, shift: float = 0.0) -> np.ndarray:
    """Solve ``(Q + shift I) X = rhs`` for symmetric positive-definite Q + shift I."""
    Q = np.asarray(Q, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    A = 0.5 * (Q + Q.T)
    if shift:
        A = A + shift * np.eye(A.shape[0])
    try:
        factor = scipy.linalg.cho_factor(A, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"Cholesky factorization failed (shift={shift}); matrix is not positive definite"
        ) from exc
    X = scipy.linalg.cho_solve(factor, rhs)

    rhs_scale = np.max(np.abs(rhs)) if rhs.size else 0.0
    residual = np.max(np.abs(A @ X - rhs)) if rhs.size else 0.0
    if residual > 1e-9 * max(rhs_scale, 1e-300):
        raise NotPositiveDefiniteError(
            f"solve residual {residual:.3e} exceeds 1e-9 * max|rhs|; matrix too ill-conditioned"
        )
    return X
