"""Kernel ridge regression for the left inverse of the injection map.

Observer coordinates z = T(x) are the inputs and the states x the targets.
The Laplace kernel is the default; it is strictly positive definite, so the
ridge can sit close to zero. Far from the training points the regressor
decays to zero rather than extrapolating, which is why the observer reports
a nearest-training-point distance alongside its estimates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .injection import InjectionModel, eval_T
from .linalg import spd_solve

DEFAULT_XI = 1e-8

KERNEL_KINDS = ("laplace", "gaussian")


def laplace_kernel(zi: np.ndarray, zj: np.ndarray, length_scale: float) -> float:
    """exp(-|zi - zj| / l); equals 1 at zero distance."""
    if length_scale <= 0:
        raise ValueError("length_scale must be positive")
    return float(np.exp(-np.linalg.norm(np.asarray(zi) - np.asarray(zj)) / length_scale))


def _kernel_matrix(Za: np.ndarray, Zb: np.ndarray, length_scale: float, kind: str) -> np.ndarray:
    D = cdist(np.atleast_2d(Za), np.atleast_2d(Zb))
    if kind == "laplace":
        return np.exp(-D / length_scale)
    if kind == "gaussian":
        return np.exp(-(D**2) / (2.0 * length_scale**2))
    raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KERNEL_KINDS}")


@dataclass(frozen=True)
class KrrModel:
    """Dual-form kernel regressor: stored inputs plus dual coefficients."""

    z_points: np.ndarray
    alpha: np.ndarray
    length_scale: float
    xi: float
    kernel_kind: str = "laplace"


def fit_inverse(
    injection: InjectionModel,
    x_points: np.ndarray,
    length_scale: float,
    xi: float = DEFAULT_XI,
    kernel_kind: str = "laplace",
) -> KrrModel:
    """Fit the inverse map on ``x_points`` via their injection images.

    Solves ``(Q + p xi I) alpha = X`` with Q the kernel Gram matrix of the
    z-points. xi = 0 is allowed only while the Gram matrix stays positive
    definite; a failing factorization suggests raising xi.
    """
    if length_scale <= 0:
        raise ValueError("length_scale must be positive")
    if xi < 0:
        raise ValueError("xi must be non-negative")
    x_points = np.atleast_2d(np.asarray(x_points, dtype=float))
    z = eval_T(injection, x_points)

    D = cdist(z, z)
    off_diag = D + np.diag(np.full(len(z), np.inf))
    if len(z) > 1 and off_diag.min() < 1e-12:
        i, j = np.unravel_index(np.argmin(off_diag), off_diag.shape)
        warnings.warn(
            f"near-duplicate z-points {i} and {j} (distance {off_diag[i, j]:.3e}); "
            "the kernel matrix may be numerically singular",
            stacklevel=2,
        )

    if kernel_kind == "laplace":
        Q = np.exp(-D / length_scale)
    elif kernel_kind == "gaussian":
        Q = np.exp(-(D**2) / (2.0 * length_scale**2))
    else:
        raise ValueError(f"unknown kernel kind {kernel_kind!r}; expected one of {KERNEL_KINDS}")

    alpha = spd_solve(Q, x_points, shift=len(z) * xi)
    return KrrModel(
        z_points=z, alpha=alpha, length_scale=length_scale, xi=xi, kernel_kind=kernel_kind
    )


def eval_inverse(model: KrrModel, Z: np.ndarray) -> np.ndarray:
    """State estimates at observer coordinates ``Z``; returns (q, n_x)."""
    K = _kernel_matrix(np.atleast_2d(Z), model.z_points, model.length_scale, model.kernel_kind)
    return K @ model.alpha


def nearest_training_distance(model: KrrModel, Z: np.ndarray) -> np.ndarray:
    """Distance from each row of ``Z`` to the closest training z-point."""
    return cdist(np.atleast_2d(Z), model.z_points).min(axis=1)
