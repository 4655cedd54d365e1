"""Planar vector fields and fixed-step RK4 integration.

The Brusselator reaction model is built in; other right-hand sides can be
registered by name for CLI use. All routines are pure functions of their
inputs, so repeated calls are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, IntegrationDivergedError, PeriodUndetectedError

Rhs = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class VectorField:
    """Autonomous system ``xdot = rhs(x)`` with ``dim`` state components."""

    dim: int
    rhs: Rhs
    params: dict = field(default_factory=dict)
    name: str = ""


@dataclass(frozen=True)
class OutputMap:
    """Scalar measurement ``y = h(x)``.

    Either a single coordinate (``coord``, 0-based, the default is the first
    coordinate) or a fixed linear functional ``weights @ x``.
    """

    coord: int = 0
    weights: np.ndarray | None = None

    def __call__(self, x: np.ndarray) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        if self.weights is not None:
            return x @ np.asarray(self.weights, dtype=float)
        return x[..., self.coord]


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    ``substep`` is the internal step; when it does not divide the sampling
    interval it is shrunk to the nearest exact divisor.
    """

    substep: float = 0.01
    method: str = "rk4"


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: ``t`` (n,) and states ``x`` (n, dim)."""

    t: np.ndarray
    x: np.ndarray

    def __len__(self) -> int:
        return len(self.t)


def brusselator_rhs(x: np.ndarray, a: float, b: float) -> np.ndarray:
    """Brusselator vector field at state ``x = (x1, x2)``."""
    x1, x2 = x
    return np.array([a + x1 * x1 * x2 - (b + 1.0) * x1, b * x1 - x1 * x1 * x2])


def brusselator(a: float = 1.0, b: float = 3.0) -> VectorField:
    """Brusselator system; equilibrium at ``(a, b/a)``."""
    return VectorField(
        dim=2,
        rhs=lambda x: brusselator_rhs(x, a, b),
        params={"a": float(a), "b": float(b)},
        name="brusselator",
    )


FIELD_REGISTRY: dict[str, Callable[..., VectorField]] = {"brusselator": brusselator}


def register_field(name: str, factory: Callable[..., VectorField]) -> None:
    """Register a vector-field factory so the CLI can build it by name."""
    FIELD_REGISTRY[name] = factory


def make_field(name: str, **params: float) -> VectorField:
    if name not in FIELD_REGISTRY:
        known = ", ".join(sorted(FIELD_REGISTRY))
        raise ConfigError(f"unknown system '{name}' (registered: {known})")
    return FIELD_REGISTRY[name](**params)


def _substeps_per_sample(dt: float, substep: float) -> int:
    """Substep count per sampling interval; rounds up when not a divisor."""
    ratio = dt / substep
    n = int(round(ratio))
    if n >= 1 and abs(ratio - n) <= 1e-12 * ratio:
        return n
    return max(1, math.ceil(ratio - 1e-12))


def _rk4_step(rhs: Rhs, x: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(x)
    k2 = rhs(x + 0.5 * h * k1)
    k3 = rhs(x + 0.5 * h * k2)
    k4 = rhs(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(
    field: VectorField,
    x0: np.ndarray,
    duration: float,
    dt: float,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate ``field`` from ``x0`` and return samples at 0, dt, ..., duration.

    The first sample is ``x0`` exactly. Raises IntegrationDivergedError with
    the failing time if the state leaves the finite range.
    """
    cfg = cfg or IntegratorConfig()
    if duration <= 0 or dt <= 0:
        raise ValueError("duration and dt must be positive")
    ratio = duration / dt
    n_samples = int(round(ratio))
    if abs(ratio - n_samples) > 1e-9:
        raise ValueError(f"duration/dt = {ratio} is not within 1e-9 of an integer")
    n_sub = _substeps_per_sample(dt, cfg.substep)
    h = dt / n_sub

    x = np.asarray(x0, dtype=float).copy()
    if x.shape != (field.dim,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({field.dim},)")
    out = np.empty((n_samples + 1, field.dim))
    out[0] = x
    for k in range(n_samples):
        for s in range(n_sub):
            x = _rk4_step(field.rhs, x, h)
            if not np.all(np.isfinite(x)):
                t_fail = k * dt + (s + 1) * h
                raise IntegrationDivergedError(
                    f"non-finite state at t = {t_fail:.6g}", time=t_fail
                )
        out[k + 1] = x
    t = np.arange(n_samples + 1) * dt
    return Trajectory(t=t, x=out)


def estimate_period(
    field: VectorField,
    probe_x0: np.ndarray,
    settle_time: float,
    observe_time: float,
    cfg: IntegratorConfig | None = None,
) -> float:
    """Limit-cycle period from the first state coordinate.

    Integrates at substep resolution, discards the transient before
    ``settle_time``, locates local maxima of x1 with quadratic interpolation,
    and returns their mean spacing. Raises PeriodUndetectedError when fewer
    than three maxima are found.
    """
    cfg = cfg or IntegratorConfig()
    h = cfg.substep
    total = round((settle_time + observe_time) / h) * h
    traj = integrate(field, probe_x0, total, h, cfg)
    s = traj.x[:, 0]
    t = traj.t

    peak_times = []
    for i in range(1, len(s) - 1):
        if t[i] < settle_time:
            continue
        if s[i] > s[i - 1] and s[i] > s[i + 1]:
            denom = s[i - 1] - 2.0 * s[i] + s[i + 1]
            offset = 0.0 if denom == 0.0 else 0.5 * h * (s[i - 1] - s[i + 1]) / denom
            peak_times.append(t[i] + offset)
    if len(peak_times) < 3:
        raise PeriodUndetectedError(
            f"found {len(peak_times)} maxima after t = {settle_time}; need >= 3"
        )
    return float(np.mean(np.diff(peak_times)))
