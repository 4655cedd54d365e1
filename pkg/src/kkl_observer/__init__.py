"""Data-driven KKL observer synthesis for planar limit-cycle systems.

Pipeline: simulate trajectory data, fit Koopman eigenfunctions on an
eigenvalue lattice, assemble the injection map as their linear combination,
fit its left inverse by kernel ridge regression, and run the resulting
observer.
"""

from .basis import PolyBasis, build_basis, eval_basis
from .config import PipelineConfig, load_config
from .dataset import (
    SamplingSpec,
    ScatterSet,
    SnapshotPairs,
    StateFilter,
    generate_pairs,
    generate_scatter,
    load_pairs,
    load_scatter,
    save_pairs,
    save_scatter,
)
from .dynamics import (
    IntegratorConfig,
    OutputMap,
    Trajectory,
    VectorField,
    brusselator,
    brusselator_rhs,
    estimate_period,
    integrate,
    make_field,
    register_field,
)
from .eigenfunctions import Eigenfunction, eigen_defect, eval_eigenfunction, fit_eigenfunction
from .injection import (
    EigenLattice,
    InjectionModel,
    build_lattice,
    check_admissibility,
    eval_T,
    eval_T_complex,
    fit_factors,
    fit_injection,
    injection_residuals,
)
from .inverse import KrrModel, eval_inverse, fit_inverse, laplace_kernel, nearest_training_distance
from .observer import (
    ErrorReport,
    ObserverConfig,
    ObserverRun,
    error_report,
    observer_step,
    run_observer,
    save_run,
)

__all__ = [
    "PolyBasis",
    "build_basis",
    "eval_basis",
    "PipelineConfig",
    "load_config",
    "SamplingSpec",
    "ScatterSet",
    "SnapshotPairs",
    "StateFilter",
    "generate_pairs",
    "generate_scatter",
    "load_pairs",
    "load_scatter",
    "save_pairs",
    "save_scatter",
    "IntegratorConfig",
    "OutputMap",
    "Trajectory",
    "VectorField",
    "brusselator",
    "brusselator_rhs",
    "estimate_period",
    "integrate",
    "make_field",
    "register_field",
    "Eigenfunction",
    "eigen_defect",
    "eval_eigenfunction",
    "fit_eigenfunction",
    "EigenLattice",
    "InjectionModel",
    "build_lattice",
    "check_admissibility",
    "eval_T",
    "eval_T_complex",
    "fit_factors",
    "fit_injection",
    "injection_residuals",
    "KrrModel",
    "eval_inverse",
    "fit_inverse",
    "laplace_kernel",
    "nearest_training_distance",
    "ErrorReport",
    "ObserverConfig",
    "ObserverRun",
    "error_report",
    "observer_step",
    "run_observer",
    "save_run",
]
