"""Koopman eigenfunction regression from snapshot pairs.

For a chosen continuous-time eigenvalue mu, the eigenfunction is sought in
the span of a polynomial dictionary. Stacking the defect rows
``G(x_i^+) - e^(mu dt) G(x_i)`` gives a Hermitian Gram matrix whose minimal
eigenvector is the best unit-norm coefficient vector; the attained minimal
eigenvalue measures how far the data are from supporting an exact
eigenfunction.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import PolyBasis, eval_basis
from .dataset import SnapshotPairs
from .errors import DegenerateEigenfunctionError
from .linalg import hermitian_eigenvalues, hermitian_min_eigvec

_DEGENERACY_GAP = 1e-10


@dataclass(frozen=True)
class Eigenfunction:
    """Fitted eigenfunction: unit-norm, phase-fixed coefficients over ``basis``.

    ``rms_scale`` is the training RMS of the raw values; evaluation divides
    by it so the fitted function has unit RMS on the training set. ``defect``
    is the relative residual of the one-step eigen-relation on the data.
    """

    mu: complex
    beta: np.ndarray
    basis: PolyBasis
    rms_scale: float
    defect: float


def eval_eigenfunction(eigf: Eigenfunction, X: np.ndarray) -> np.ndarray:
    """Normalized eigenfunction values at the rows of ``X`` (complex)."""
    return (eval_basis(eigf.basis, X) @ eigf.beta) / eigf.rms_scale


def fit_eigenfunction(basis: PolyBasis, pairs: SnapshotPairs, mu: complex) -> Eigenfunction:
    """Estimate the eigenfunction for eigenvalue ``mu`` from snapshot pairs.

    mu = 0 short-circuits to the exact constant function: the constant is
    always an exact invariant and tying it to the data risks degeneracy with
    other near-invariant directions.
    """
    if pairs.d < 1:
        raise ValueError("pairs dataset is empty")
    mu = complex(mu)
    if mu == 0:
        beta = np.zeros(basis.size, dtype=complex)
        beta[0] = 1.0
        return Eigenfunction(mu=mu, beta=beta, basis=basis, rms_scale=1.0, defect=0.0)

    if pairs.d < basis.size:
        warnings.warn(
            f"only {pairs.d} pairs for {basis.size} basis functions; "
            "the eigenfunction problem is under-determined",
            stacklevel=2,
        )

    rho = cmath.exp(mu * pairs.dt)
    GX = eval_basis(basis, pairs.x)
    GXp = eval_basis(basis, pairs.x_plus)
    rows = GXp - rho * GX
    gram = rows.conj().T @ rows
    lam_min, beta = hermitian_min_eigvec(gram)

    spectrum = hermitian_eigenvalues(gram)
    scale = max(abs(spectrum[0]), abs(spectrum[-1]))
    if len(spectrum) > 1 and spectrum[1] - spectrum[0] < _DEGENERACY_GAP * scale:
        warnings.warn(
            f"near-degenerate minimal eigenvalue for mu={mu}: "
            f"gap {spectrum[1] - spectrum[0]:.3e} vs scale {scale:.3e}",
            stacklevel=2,
        )

    values = GX @ beta
    rms = float(np.sqrt(np.mean(np.abs(values) ** 2)))
    if rms < 1e-14:
        raise DegenerateEigenfunctionError(
            f"fitted eigenfunction for mu={mu} vanishes on the data (rms={rms:.3e})"
        )
    defect = float(np.sqrt(max(lam_min, 0.0) / pairs.d) / rms)
    return Eigenfunction(mu=mu, beta=beta, basis=basis, rms_scale=rms, defect=defect)


def eigen_defect(eigf: Eigenfunction, pairs: SnapshotPairs) -> float:
    """Relative one-step residual of the eigen-relation on ``pairs``.

    rms over rows of ``|phi(x+) - e^(mu dt) phi(x)|`` divided by the rms of
    ``|phi(x)|``; scale-invariant, so usable on held-out data.
    """
    rho = cmath.exp(eigf.mu * pairs.dt)
    vals = eval_basis(eigf.basis, pairs.x) @ eigf.beta
    vals_p = eval_basis(eigf.basis, pairs.x_plus) @ eigf.beta
    denom = float(np.sqrt(np.mean(np.abs(vals) ** 2)))
    if denom < 1e-14:
        raise DegenerateEigenfunctionError(
            f"eigenfunction for mu={eigf.mu} vanishes on the data (rms={denom:.3e})"
        )
    num = float(np.sqrt(np.mean(np.abs(vals_p - rho * vals) ** 2)))
    return num / denom
