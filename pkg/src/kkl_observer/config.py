"""Pipeline configuration: defaults, YAML loading, strict validation.

Every default reproduces the reference Brusselator experiment; a config
file only needs the keys it wants to change. Unknown keys are rejected so
typos fail loudly. Coordinate indices in config files are 1-based to match
the x1/x2 CSV column names.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import yaml

from .dataset import (
    StateFilter,
    affine_max_filter,
    affine_min_filter,
    coord_max_filter,
    coord_min_filter,
    dist_max_filter,
    dist_min_filter,
)
from .errors import ConfigError


@dataclass(frozen=True)
class FilterSpec:
    """Declarative filter; ``build`` turns it into a StateFilter predicate."""

    kind: str
    value: float
    index: int | None = None
    center: tuple[float, ...] | None = None
    weights: tuple[float, ...] | None = None

    def build(self) -> StateFilter:
        if self.kind == "coord_min":
            return coord_min_filter(self.index - 1, self.value)
        if self.kind == "coord_max":
            return coord_max_filter(self.index - 1, self.value)
        if self.kind == "dist_min":
            return dist_min_filter(self.center, self.value)
        if self.kind == "dist_max":
            return dist_max_filter(self.center, self.value)
        if self.kind == "affine_max":
            return affine_max_filter(self.weights, self.value)
        if self.kind == "affine_min":
            return affine_min_filter(self.weights, self.value)
        raise ConfigError(f"unknown filter kind {self.kind!r}")

    def as_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "value": self.value}
        if self.index is not None:
            out["index"] = self.index
        if self.center is not None:
            out["center"] = list(self.center)
        if self.weights is not None:
            out["weights"] = list(self.weights)
        return out


@dataclass(frozen=True)
class SystemSection:
    name: str = "brusselator"
    params: dict = field(default_factory=lambda: {"a": 1.0, "b": 3.0})


@dataclass(frozen=True)
class SamplingSection:
    n_traj: int = 100
    duration: float = 3.0
    dt: float = 0.1
    init_mean: tuple[float, ...] = (1.0, 3.0)
    init_std: float = 0.75
    filters: tuple[FilterSpec, ...] = (
        FilterSpec(kind="coord_min", index=1, value=0.2),
        FilterSpec(kind="coord_min", index=2, value=0.1),
        FilterSpec(kind="dist_min", center=(1.0, 3.0), value=0.5),
        FilterSpec(kind="affine_max", weights=(1.0, 1.0), value=7.0),
    )


@dataclass(frozen=True)
class LatticeSection:
    mu_real: float = -1.0
    period: float | str = 7.16  # a number, or "estimate"
    M: int = 7
    N: int = 7


@dataclass(frozen=True)
class KrrSection:
    source: str = "scatter"  # scatter | pairs
    count: int = 1000
    std: float = 1.15
    mean: tuple[float, ...] = (1.0, 3.0)
    filters: tuple[FilterSpec, ...] = (
        FilterSpec(kind="coord_min", index=1, value=0.2),
        FilterSpec(kind="coord_min", index=2, value=0.1),
    )
    length_scale: float = 2.0
    xi: float = 1e-8
    kernel: str = "laplace"


@dataclass(frozen=True)
class ObserverSection:
    x0_true: tuple[float, ...] = (2.0, 2.0)
    x0_hat: tuple[float, ...] = (1.5, 1.5)
    duration: float = 30.0
    dt: float = 0.1


@dataclass(frozen=True)
class PipelineConfig:
    system: SystemSection = field(default_factory=SystemSection)
    output_coord: int = 1  # 1-based; h(x) = x1 by default
    sampling: SamplingSection = field(default_factory=SamplingSection)
    basis_degree: int = 5
    lattice: LatticeSection = field(default_factory=LatticeSection)
    lambdas: tuple[float, ...] = (0.5, 0.25)
    krr: KrrSection = field(default_factory=KrrSection)
    observer: ObserverSection = field(default_factory=ObserverSection)
    substep: float = 0.01
    seed: int = 0

    def as_dict(self) -> dict:
        return {
            "system": {"name": self.system.name, "params": dict(self.system.params)},
            "output": {"coord": self.output_coord},
            "sampling": {
                "n_traj": self.sampling.n_traj,
                "duration": self.sampling.duration,
                "dt": self.sampling.dt,
                "init_mean": list(self.sampling.init_mean),
                "init_std": self.sampling.init_std,
                "filters": [f.as_dict() for f in self.sampling.filters],
            },
            "basis": {"degree": self.basis_degree},
            "lattice": {
                "mu_real": self.lattice.mu_real,
                "period": self.lattice.period,
                "M": self.lattice.M,
                "N": self.lattice.N,
            },
            "lambdas": list(self.lambdas),
            "krr": {
                "source": self.krr.source,
                "count": self.krr.count,
                "std": self.krr.std,
                "mean": list(self.krr.mean),
                "filters": [f.as_dict() for f in self.krr.filters],
                "length_scale": self.krr.length_scale,
                "xi": self.krr.xi,
                "kernel": self.krr.kernel,
            },
            "observer": {
                "x0_true": list(self.observer.x0_true),
                "x0_hat": list(self.observer.x0_hat),
                "duration": self.observer.duration,
                "dt": self.observer.dt,
            },
            "integrator": {"substep": self.substep},
            "seed": self.seed,
        }

    def hash(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Parsing helpers. Each section consumes its known keys and rejects the rest.
# ---------------------------------------------------------------------------


def _require_mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping, got {type(value).__name__}")
    return value


def _reject_unknown(data: dict, allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}; allowed: {sorted(allowed)}")


def _get_number(data: dict, key: str, where: str, default: float) -> float:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def _get_int(data: dict, key: str, where: str, default: int) -> int:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
    return value


def _get_vector(data: dict, key: str, where: str, default: tuple) -> tuple[float, ...]:
    value = data.get(key, list(default))
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{where}.{key} must be a non-empty list of numbers, got {value!r}")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key} must contain numbers, got {value!r}") from None


def _parse_filter(data: Any, where: str) -> FilterSpec:
    data = _require_mapping(data, where)
    _reject_unknown(data, ["kind", "value", "index", "center", "weights"], where)
    kind = data.get("kind")
    if kind not in ("coord_min", "coord_max", "dist_min", "dist_max", "affine_max", "affine_min"):
        raise ConfigError(f"{where}.kind must name a filter kind, got {kind!r}")
    value = _get_number(data, "value", where, default=None) if "value" in data else None
    if value is None:
        raise ConfigError(f"{where} needs a 'value'")
    index = None
    center = None
    weights = None
    if kind.startswith("coord"):
        index = _get_int(data, "index", where, default=0)
        if index < 1:
            raise ConfigError(f"{where}.index is 1-based and must be >= 1, got {index}")
    elif kind.startswith("dist"):
        if "center" not in data:
            raise ConfigError(f"{where} needs a 'center'")
        center = _get_vector(data, "center", where, default=())
    else:
        if "weights" not in data:
            raise ConfigError(f"{where} needs 'weights'")
        weights = _get_vector(data, "weights", where, default=())
    return FilterSpec(kind=kind, value=value, index=index, center=center, weights=weights)


def _parse_filters(data: dict, key: str, where: str, default: tuple) -> tuple[FilterSpec, ...]:
    if key not in data:
        return default
    raw = data[key]
    if not isinstance(raw, list):
        raise ConfigError(f"{where}.{key} must be a list of filter mappings")
    return tuple(_parse_filter(item, f"{where}.{key}[{i}]") for i, item in enumerate(raw))


def config_from_mapping(data: dict | None) -> PipelineConfig:
    """Build a validated PipelineConfig; missing keys fall back to defaults."""
    data = {} if data is None else _require_mapping(data, "config")
    _reject_unknown(
        data,
        ["system", "output", "sampling", "basis", "lattice", "lambdas", "krr",
         "observer", "integrator", "seed"],
        "config",
    )
    defaults = PipelineConfig()

    sys_raw = _require_mapping(data.get("system", {}), "system")
    _reject_unknown(sys_raw, ["name", "params"], "system")
    name = sys_raw.get("name", defaults.system.name)
    if not isinstance(name, str):
        raise ConfigError(f"system.name must be a string, got {name!r}")
    params_raw = _require_mapping(sys_raw.get("params", dict(defaults.system.params)), "system.params")
    params = {}
    for key, value in params_raw.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"system.params.{key} must be a number, got {value!r}")
        params[str(key)] = float(value)
    system = SystemSection(name=name, params=params)

    out_raw = _require_mapping(data.get("output", {}), "output")
    _reject_unknown(out_raw, ["coord"], "output")
    output_coord = _get_int(out_raw, "coord", "output", defaults.output_coord)
    if output_coord < 1:
        raise ConfigError(f"output.coord is 1-based and must be >= 1, got {output_coord}")

    samp_raw = _require_mapping(data.get("sampling", {}), "sampling")
    _reject_unknown(
        samp_raw, ["n_traj", "duration", "dt", "init_mean", "init_std", "filters"], "sampling"
    )
    sampling = SamplingSection(
        n_traj=_get_int(samp_raw, "n_traj", "sampling", defaults.sampling.n_traj),
        duration=_get_number(samp_raw, "duration", "sampling", defaults.sampling.duration),
        dt=_get_number(samp_raw, "dt", "sampling", defaults.sampling.dt),
        init_mean=_get_vector(samp_raw, "init_mean", "sampling", defaults.sampling.init_mean),
        init_std=_get_number(samp_raw, "init_std", "sampling", defaults.sampling.init_std),
        filters=_parse_filters(samp_raw, "filters", "sampling", defaults.sampling.filters),
    )
    if sampling.n_traj < 1:
        raise ConfigError("sampling.n_traj must be >= 1")
    if sampling.duration <= 0 or sampling.dt <= 0:
        raise ConfigError("sampling.duration and sampling.dt must be positive")
    if sampling.init_std < 0:
        raise ConfigError("sampling.init_std must be non-negative")

    basis_raw = _require_mapping(data.get("basis", {}), "basis")
    _reject_unknown(basis_raw, ["degree"], "basis")
    basis_degree = _get_int(basis_raw, "degree", "basis", defaults.basis_degree)
    if basis_degree < 0:
        raise ConfigError("basis.degree must be >= 0")

    latt_raw = _require_mapping(data.get("lattice", {}), "lattice")
    _reject_unknown(latt_raw, ["mu_real", "period", "M", "N"], "lattice")
    period: float | str = latt_raw.get("period", defaults.lattice.period)
    if isinstance(period, str):
        if period != "estimate":
            raise ConfigError(f"lattice.period must be a number or 'estimate', got {period!r}")
    elif isinstance(period, bool) or not isinstance(period, (int, float)):
        raise ConfigError(f"lattice.period must be a number or 'estimate', got {period!r}")
    else:
        period = float(period)
        if period <= 0:
            raise ConfigError("lattice.period must be positive")
    lattice = LatticeSection(
        mu_real=_get_number(latt_raw, "mu_real", "lattice", defaults.lattice.mu_real),
        period=period,
        M=_get_int(latt_raw, "M", "lattice", defaults.lattice.M),
        N=_get_int(latt_raw, "N", "lattice", defaults.lattice.N),
    )
    if lattice.mu_real >= 0:
        raise ConfigError("lattice.mu_real must be negative")
    if lattice.M < 0 or lattice.N < 0:
        raise ConfigError("lattice.M and lattice.N must be non-negative")

    lambdas = data.get("lambdas", list(defaults.lambdas))
    if not isinstance(lambdas, list) or not lambdas:
        raise ConfigError("lambdas must be a non-empty list of positive numbers")
    try:
        lambdas = tuple(float(v) for v in lambdas)
    except (TypeError, ValueError):
        raise ConfigError(f"lambdas must contain numbers, got {lambdas!r}") from None
    if any(v <= 0 for v in lambdas):
        raise ConfigError("lambdas must all be positive")

    krr_raw = _require_mapping(data.get("krr", {}), "krr")
    _reject_unknown(
        krr_raw,
        ["source", "count", "std", "mean", "filters", "length_scale", "xi", "kernel"],
        "krr",
    )
    source = krr_raw.get("source", defaults.krr.source)
    if source not in ("scatter", "pairs"):
        raise ConfigError(f"krr.source must be 'scatter' or 'pairs', got {source!r}")
    kernel = krr_raw.get("kernel", defaults.krr.kernel)
    if kernel not in ("laplace", "gaussian"):
        raise ConfigError(f"krr.kernel must be 'laplace' or 'gaussian', got {kernel!r}")
    krr = KrrSection(
        source=source,
        count=_get_int(krr_raw, "count", "krr", defaults.krr.count),
        std=_get_number(krr_raw, "std", "krr", defaults.krr.std),
        mean=_get_vector(krr_raw, "mean", "krr", defaults.krr.mean),
        filters=_parse_filters(krr_raw, "filters", "krr", defaults.krr.filters),
        length_scale=_get_number(krr_raw, "length_scale", "krr", defaults.krr.length_scale),
        xi=_get_number(krr_raw, "xi", "krr", defaults.krr.xi),
        kernel=kernel,
    )
    if krr.count < 1:
        raise ConfigError("krr.count must be >= 1")
    if krr.length_scale <= 0:
        raise ConfigError("krr.length_scale must be positive")
    if krr.xi < 0:
        raise ConfigError("krr.xi must be non-negative")

    obs_raw = _require_mapping(data.get("observer", {}), "observer")
    _reject_unknown(obs_raw, ["x0_true", "x0_hat", "duration", "dt"], "observer")
    observer = ObserverSection(
        x0_true=_get_vector(obs_raw, "x0_true", "observer", defaults.observer.x0_true),
        x0_hat=_get_vector(obs_raw, "x0_hat", "observer", defaults.observer.x0_hat),
        duration=_get_number(obs_raw, "duration", "observer", defaults.observer.duration),
        dt=_get_number(obs_raw, "dt", "observer", defaults.observer.dt),
    )
    if observer.duration <= 0 or observer.dt <= 0:
        raise ConfigError("observer.duration and observer.dt must be positive")

    integ_raw = _require_mapping(data.get("integrator", {}), "integrator")
    _reject_unknown(integ_raw, ["substep"], "integrator")
    substep = _get_number(integ_raw, "substep", "integrator", defaults.substep)
    if substep <= 0:
        raise ConfigError("integrator.substep must be positive")

    seed = data.get("seed", defaults.seed)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed must fit in an unsigned 64-bit integer, got {seed}")

    return PipelineConfig(
        system=system,
        output_coord=output_coord,
        sampling=sampling,
        basis_degree=basis_degree,
        lattice=lattice,
        lambdas=lambdas,
        krr=krr,
        observer=observer,
        substep=substep,
        seed=seed,
    )


def load_config(path=None) -> PipelineConfig:
    """Load a YAML config file; with no path, return the defaults."""
    if path is None:
        return PipelineConfig()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if raw is None:
        return PipelineConfig()
    return config_from_mapping(raw)
