"""Injection-map fitting over a planar eigenvalue lattice.

A planar limit-cycle system carries Koopman eigenvalues on the lattice
``m * mu_real + i * n * omega`` (m >= 0, |n| <= N, omega = 2 pi / period).
Factor eigenfunctions are fitted for the real axis (m = 0..M) and the
imaginary axis (n = 0..N); negative n comes from conjugation, which keeps
the dictionary exactly conjugate-closed and the fitted map real on real
states. Pairwise products of the factors form the dictionary in which each
injection component is a least-squares fit against the measured output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import PolyBasis, eval_basis
from .dataset import SnapshotPairs
from .eigenfunctions import Eigenfunction, eval_eigenfunction, fit_eigenfunction
from .errors import InvalidLambdaError
from .linalg import complex_least_squares

ADMISSIBILITY_TOL = 1e-9
DEFAULT_RIDGE = 1e-10


@dataclass(frozen=True)
class LatticeNode:
    m: int
    n: int
    mu: complex


@dataclass(frozen=True)
class EigenLattice:
    """Eigenvalue lattice ``mu = m * mu_real + i * n * omega``.

    Nodes are enumerated m-major with n running -N..N, so the layout of
    serialized coefficient rows is fixed.
    """

    mu_real: float
    omega: float
    M: int
    N: int
    nodes: tuple[LatticeNode, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)


def build_lattice(mu_real: float, omega: float, M: int, N: int) -> EigenLattice:
    if mu_real >= 0:
        raise ValueError("mu_real must be negative")
    if omega <= 0:
        raise ValueError("omega must be positive")
    if M < 0 or N < 0:
        raise ValueError("M and N must be non-negative")
    nodes = tuple(
        LatticeNode(m=m, n=n, mu=complex(m * mu_real, n * omega))
        for m in range(M + 1)
        for n in range(-N, N + 1)
    )
    return EigenLattice(mu_real=mu_real, omega=omega, M=M, N=N, nodes=nodes)


def check_admissibility(lattice: EigenLattice, lambdas: np.ndarray) -> None:
    """Reject filter rates that collide with a real lattice eigenvalue."""
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(lambdas <= 0):
        raise InvalidLambdaError(f"filter rates must be positive, got {lambdas.tolist()}")
    for node in lattice.nodes:
        if node.n != 0:
            continue
        for j, lam in enumerate(lambdas):
            if abs(lam + node.mu.real) <= ADMISSIBILITY_TOL:
                raise InvalidLambdaError(
                    f"lambda_{j + 1} = {lam} equals -mu for lattice node "
                    f"(m={node.m}, n=0, mu={node.mu.real}); pick a rate away from "
                    f"the real eigenvalues"
                )


@dataclass(frozen=True)
class InjectionModel:
    """Fitted injection: complex coefficient rows over the product dictionary."""

    basis: PolyBasis
    lattice: EigenLattice
    real_factors: tuple[Eigenfunction, ...]
    imag_factors: tuple[Eigenfunction, ...]
    lambdas: np.ndarray
    b: np.ndarray
    fit_rmse: np.ndarray
    ridge: float

    @property
    def n_z(self) -> int:
        return len(self.lambdas)


def fit_factors(
    basis: PolyBasis, pairs: SnapshotPairs, lattice: EigenLattice
) -> tuple[tuple[Eigenfunction, ...], tuple[Eigenfunction, ...]]:
    """Factor eigenfunctions for m = 0..M (real axis) and n = 0..N (imaginary)."""
    real_factors = tuple(
        fit_eigenfunction(basis, pairs, complex(m * lattice.mu_real, 0.0))
        for m in range(lattice.M + 1)
    )
    imag_factors = tuple(
        fit_eigenfunction(basis, pairs, complex(0.0, n * lattice.omega))
        for n in range(lattice.N + 1)
    )
    return real_factors, imag_factors


def eval_dictionary(
    lattice: EigenLattice,
    real_factors: tuple[Eigenfunction, ...],
    imag_factors: tuple[Eigenfunction, ...],
    X: np.ndarray,
) -> np.ndarray:
    """Product-dictionary values at the rows of ``X``; (d, lattice.size) complex.

    The column for node (m, n) is the elementwise product of the m-th real
    factor with the n-th imaginary factor; negative n uses the conjugate of
    the positive-n factor.
    """
    vr = [eval_eigenfunction(f, X) for f in real_factors]
    vi = [eval_eigenfunction(f, X) for f in imag_factors]
    cols = np.empty((vr[0].shape[0], lattice.size), dtype=complex)
    for c, node in enumerate(lattice.nodes):
        imag_vals = vi[node.n] if node.n >= 0 else np.conj(vi[-node.n])
        cols[:, c] = vr[node.m] * imag_vals
    return cols


def _design_rows(phi: np.ndarray, phi_plus: np.ndarray, lam: float, dt: float) -> np.ndarray:
    # Backward-Euler stencil for the output filter zdot = -lam z + y: the
    # (1 + lam dt) weight sits on the advanced sample. This keeps the fitted
    # coefficient of an eigenfunction with eigenvalue mu at eta/(mu + lam);
    # weighting the current sample instead would converge to eta/(mu - lam).
    return ((1.0 + lam * dt) * phi_plus - phi) / dt


def fit_injection(
    basis: PolyBasis,
    pairs: SnapshotPairs,
    lattice: EigenLattice,
    lambdas,
    ridge: float = DEFAULT_RIDGE,
) -> InjectionModel:
    """Fit one coefficient row per filter rate by regularized least squares."""
    lambdas = np.asarray(lambdas, dtype=float)
    check_admissibility(lattice, lambdas)

    real_factors, imag_factors = fit_factors(basis, pairs, lattice)
    phi = eval_dictionary(lattice, real_factors, imag_factors, pairs.x)
    phi_plus = eval_dictionary(lattice, real_factors, imag_factors, pairs.x_plus)

    b = np.empty((len(lambdas), lattice.size), dtype=complex)
    fit_rmse = np.empty(len(lambdas))
    for j, lam in enumerate(lambdas):
        V = _design_rows(phi, phi_plus, lam, pairs.dt)
        b[j] = complex_least_squares(V, pairs.y, ridge)
        fit_rmse[j] = float(np.sqrt(np.mean(np.abs(V @ b[j] - pairs.y) ** 2)))
    return InjectionModel(
        basis=basis,
        lattice=lattice,
        real_factors=real_factors,
        imag_factors=imag_factors,
        lambdas=lambdas,
        b=b,
        fit_rmse=fit_rmse,
        ridge=ridge,
    )


def eval_T_complex(model: InjectionModel, X: np.ndarray) -> np.ndarray:
    """Complex injection values; the imaginary part is a symmetry diagnostic."""
    phi = eval_dictionary(model.lattice, model.real_factors, model.imag_factors, X)
    return phi @ model.b.T


def eval_T(model: InjectionModel, X: np.ndarray) -> np.ndarray:
    """Injection values T(X) as a real (d, n_z) matrix."""
    return np.real(eval_T_complex(model, X))


def injection_residuals(model: InjectionModel, pairs: SnapshotPairs) -> np.ndarray:
    """Per-component rms of the fit stencil applied to ``pairs``.

    On the training set this reproduces ``fit_rmse``; on fresh data it is a
    generalization check.
    """
    phi = eval_dictionary(model.lattice, model.real_factors, model.imag_factors, pairs.x)
    phi_plus = eval_dictionary(model.lattice, model.real_factors, model.imag_factors, pairs.x_plus)
    out = np.empty(model.n_z)
    for j, lam in enumerate(model.lambdas):
        V = _design_rows(phi, phi_plus, lam, pairs.dt)
        out[j] = float(np.sqrt(np.mean(np.abs(V @ model.b[j] - pairs.y) ** 2)))
    return out
