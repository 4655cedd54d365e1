"""Shared fixtures: small generated datasets and linear-system oracles."""

from __future__ import annotations

import numpy as np
import pytest

from kkl_observer.basis import build_basis
from kkl_observer.dataset import (
    SamplingSpec,
    SnapshotPairs,
    coord_min_filter,
    generate_pairs,
)
from kkl_observer.dynamics import IntegratorConfig, OutputMap, VectorField, brusselator


def decay_field() -> VectorField:
    """One-dimensional xdot = -x."""
    return VectorField(dim=1, rhs=lambda x: -x, name="decay")


def exact_flow_pairs(dt: float, n: int = 200, lo: float = 0.1, hi: float = 2.0) -> SnapshotPairs:
    """Snapshot pairs of xdot = -x from the closed-form flow, h(x) = x."""
    x = np.linspace(lo, hi, n)[:, None]
    return SnapshotPairs(
        dt=dt,
        x=x,
        x_plus=np.exp(-dt) * x,
        y=x[:, 0].copy(),
        traj_id=np.zeros(n, dtype=int),
        k=np.arange(n, dtype=int),
    )


def small_sampling_spec(seed: int = 0, n_traj: int = 20) -> SamplingSpec:
    return SamplingSpec(
        n_traj=n_traj,
        duration=3.0,
        dt=0.1,
        init_mean=np.array([1.0, 3.0]),
        init_std=0.75,
        filters=(coord_min_filter(0, 0.2), coord_min_filter(1, 0.1)),
        seed=seed,
    )


@pytest.fixture(scope="session")
def brusselator_pairs() -> SnapshotPairs:
    """Small Brusselator dataset shared by the fitting tests."""
    return generate_pairs(
        brusselator(), OutputMap(coord=0), small_sampling_spec(), IntegratorConfig()
    )


@pytest.fixture(scope="session")
def degree3_basis_1d():
    return build_basis(n_vars=1, max_degree=3)


@pytest.fixture(scope="session")
def degree5_basis_2d():
    return build_basis(n_vars=2, max_degree=5)


@pytest.fixture(scope="session")
def small_injection_model(brusselator_pairs, degree5_basis_2d):
    """Reduced lattice (M = N = 3) fitted on the small Brusselator dataset."""
    import math
    import warnings

    from kkl_observer.injection import build_lattice, fit_injection

    lattice = build_lattice(-1.0, 2.0 * math.pi / 7.16, 3, 3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fit_injection(degree5_basis_2d, brusselator_pairs, lattice, [0.5, 0.25])
