"""Model-artifact serialization.

A fitted model (basis, lattice, factor eigenfunctions, injection
coefficients, inverse-map regressor, provenance) is stored as a single
versioned JSON document. Floats are written with 17 significant digits so a
reload reproduces evaluations bit for bit.
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from typing import Any

import numpy as np

from .basis import PolyBasis, build_basis
from .eigenfunctions import Eigenfunction
from .errors import SchemaError
from .injection import EigenLattice, InjectionModel, build_lattice
from .inverse import KrrModel

ARTIFACT_VERSION = "1"


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"cannot serialize non-finite number {v}")
        return format(v, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        return _encode(value.tolist())
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_encode(v) for v in value) + "]"
    if isinstance(value, dict):
        items = (json.dumps(str(k)) + ":" + _encode(v) for k, v in value.items())
        return "{" + ",".join(items) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _factor_record(kind: str, order: int, f: Eigenfunction) -> dict:
    return {
        kind: order,
        "mu": [f.mu.real, f.mu.imag],
        "beta_re": np.real(f.beta),
        "beta_im": np.imag(f.beta),
        "rms_scale": f.rms_scale,
        "defect": f.defect,
    }


def save_artifact(
    path,
    injection: InjectionModel,
    krr: KrrModel,
    config_hash: str,
    seed: int,
) -> None:
    doc = {
        "version": ARTIFACT_VERSION,
        "basis": {
            "n_vars": injection.basis.n_vars,
            "max_degree": injection.basis.max_degree,
            "exponents": [list(e) for e in injection.basis.exponents],
        },
        "lattice": {
            "mu_real": injection.lattice.mu_real,
            "omega": injection.lattice.omega,
            "M": injection.lattice.M,
            "N": injection.lattice.N,
        },
        "real_factors": [
            _factor_record("m", m, f) for m, f in enumerate(injection.real_factors)
        ],
        "imag_factors": [
            _factor_record("n", n, f) for n, f in enumerate(injection.imag_factors)
        ],
        "injection": {
            "lambdas": injection.lambdas,
            "b_re": np.real(injection.b),
            "b_im": np.imag(injection.b),
            "fit_rmse": injection.fit_rmse,
            "ridge": injection.ridge,
        },
        "krr": {
            "kernel": krr.kernel_kind,
            "length_scale": krr.length_scale,
            "xi": krr.xi,
            "z_points": krr.z_points,
            "alpha": krr.alpha,
        },
        "provenance": {
            "config_sha256": config_hash,
            "seed": seed,
            "created": datetime.now(timezone.utc).isoformat(),
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_encode(doc) + "\n")


def _load_factor(record: dict, kind: str, basis: PolyBasis) -> Eigenfunction:
    beta = np.asarray(record["beta_re"], dtype=float) + 1j * np.asarray(
        record["beta_im"], dtype=float
    )
    mu_re, mu_im = record["mu"]
    return Eigenfunction(
        mu=complex(mu_re, mu_im),
        beta=beta,
        basis=basis,
        rms_scale=float(record["rms_scale"]),
        defect=float(record["defect"]),
    )


def load_artifact(path) -> tuple[InjectionModel, KrrModel, dict]:
    """Reload a model artifact; returns (injection, krr, provenance)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("version")
    if version != ARTIFACT_VERSION:
        raise SchemaError(f"unsupported artifact version {version!r}")

    b = doc["basis"]
    basis = build_basis(int(b["n_vars"]), int(b["max_degree"]))
    stored = [tuple(int(v) for v in e) for e in b["exponents"]]
    if stored != list(basis.exponents):
        raise SchemaError("artifact basis exponent list does not match its declared degree")

    latt = doc["lattice"]
    lattice: EigenLattice = build_lattice(
        float(latt["mu_real"]), float(latt["omega"]), int(latt["M"]), int(latt["N"])
    )

    real_factors = tuple(_load_factor(r, "m", basis) for r in doc["real_factors"])
    imag_factors = tuple(_load_factor(r, "n", basis) for r in doc["imag_factors"])
    if len(real_factors) != lattice.M + 1 or len(imag_factors) != lattice.N + 1:
        raise SchemaError("factor counts do not match the lattice dimensions")

    inj = doc["injection"]
    b_matrix = np.asarray(inj["b_re"], dtype=float) + 1j * np.asarray(inj["b_im"], dtype=float)
    injection = InjectionModel(
        basis=basis,
        lattice=lattice,
        real_factors=real_factors,
        imag_factors=imag_factors,
        lambdas=np.asarray(inj["lambdas"], dtype=float),
        b=b_matrix,
        fit_rmse=np.asarray(inj["fit_rmse"], dtype=float),
        ridge=float(inj["ridge"]),
    )
    if injection.b.shape != (len(injection.lambdas), lattice.size):
        raise SchemaError(
            f"injection coefficient shape {injection.b.shape} does not match "
            f"{len(injection.lambdas)} rates x {lattice.size} lattice nodes"
        )

    k = doc["krr"]
    krr = KrrModel(
        z_points=np.asarray(k["z_points"], dtype=float),
        alpha=np.asarray(k["alpha"], dtype=float),
        length_scale=float(k["length_scale"]),
        xi=float(k["xi"]),
        kernel_kind=str(k["kernel"]),
    )
    return injection, krr, doc.get("provenance", {})
