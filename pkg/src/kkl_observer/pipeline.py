"""Pipeline stages shared by the CLI and the experiment scripts.

Each stage is a pure function of the configuration (plus data from earlier
stages), so the whole run is reproducible from the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import PolyBasis, build_basis
from .config import PipelineConfig
from .dataset import (
    SamplingSpec,
    ScatterSet,
    SnapshotPairs,
    generate_pairs,
    generate_scatter,
)
from .dynamics import (
    IntegratorConfig,
    OutputMap,
    VectorField,
    estimate_period,
    make_field,
)
from .injection import InjectionModel, build_lattice, check_admissibility, fit_injection
from .inverse import KrrModel, eval_inverse, fit_inverse
from .observer import ObserverConfig, ObserverRun, run_observer


def build_field(config: PipelineConfig) -> VectorField:
    return make_field(config.system.name, **config.system.params)


def build_output(config: PipelineConfig) -> OutputMap:
    return OutputMap(coord=config.output_coord - 1)


def integrator_config(config: PipelineConfig) -> IntegratorConfig:
    return IntegratorConfig(substep=config.substep)


def sampling_spec(config: PipelineConfig) -> SamplingSpec:
    s = config.sampling
    return SamplingSpec(
        n_traj=s.n_traj,
        duration=s.duration,
        dt=s.dt,
        init_mean=np.asarray(s.init_mean),
        init_std=s.init_std,
        filters=tuple(f.build() for f in s.filters),
        seed=config.seed,
    )


def stage_generate(config: PipelineConfig) -> tuple[SnapshotPairs, ScatterSet]:
    """Generate snapshot pairs and the scattered inverse-map training states."""
    field = build_field(config)
    out = build_output(config)
    cfg = integrator_config(config)
    pairs = generate_pairs(field, out, sampling_spec(config), cfg)
    scatter = generate_scatter(
        count=config.krr.count,
        mean=np.asarray(config.krr.mean),
        std=config.krr.std,
        filters=tuple(f.build() for f in config.krr.filters),
        seed=config.seed,
    )
    return pairs, scatter


def resolve_period(config: PipelineConfig, field: VectorField) -> float:
    """Configured limit-cycle period, estimating it from a probe run on request."""
    if config.lattice.period == "estimate":
        return estimate_period(
            field,
            np.asarray(config.observer.x0_true),
            settle_time=50.0,
            observe_time=30.0,
            cfg=integrator_config(config),
        )
    return float(config.lattice.period)


@dataclass(frozen=True)
class FitResult:
    basis: PolyBasis
    injection: InjectionModel
    krr: KrrModel
    period: float
    krr_train_rmse: float


def stage_fit(config: PipelineConfig, pairs: SnapshotPairs, scatter: ScatterSet) -> FitResult:
    """Fit eigenfunction factors, the injection map, and its kernel inverse."""
    field = build_field(config)
    period = resolve_period(config, field)
    omega = 2.0 * math.pi / period
    lattice = build_lattice(config.lattice.mu_real, omega, config.lattice.M, config.lattice.N)
    check_admissibility(lattice, np.asarray(config.lambdas))

    basis = build_basis(n_vars=pairs.n_x, max_degree=config.basis_degree)
    injection = fit_injection(basis, pairs, lattice, np.asarray(config.lambdas))

    x_points = scatter.points if config.krr.source == "scatter" else pairs.x
    krr = fit_inverse(
        injection,
        x_points,
        length_scale=config.krr.length_scale,
        xi=config.krr.xi,
        kernel_kind=config.krr.kernel,
    )
    reconstructed = eval_inverse(krr, krr.z_points)
    train_rmse = float(
        np.sqrt(np.mean(np.sum((reconstructed - x_points) ** 2, axis=1)))
    )
    return FitResult(
        basis=basis, injection=injection, krr=krr, period=period, krr_train_rmse=train_rmse
    )


def stage_observe(
    config: PipelineConfig, injection: InjectionModel, krr: KrrModel
) -> ObserverRun:
    """Run the observer experiment defined by the config."""
    field = build_field(config)
    out = build_output(config)
    cfg = ObserverConfig(
        lambdas=np.asarray(config.lambdas),
        x0_true=np.asarray(config.observer.x0_true),
        x0_hat=np.asarray(config.observer.x0_hat),
        duration=config.observer.duration,
        dt=config.observer.dt,
    )
    return run_observer(field, out, injection, krr, cfg, integrator_config(config))
