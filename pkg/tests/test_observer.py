import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkl_observer.basis import build_basis
from kkl_observer.dataset import SnapshotPairs
from kkl_observer.dynamics import OutputMap, VectorField
from kkl_observer.eigenfunctions import Eigenfunction
from kkl_observer.errors import ConfigError
from kkl_observer.injection import InjectionModel, build_lattice
from kkl_observer.inverse import fit_inverse
from kkl_observer.observer import (
    ErrorReport,
    ObserverConfig,
    ObserverRun,
    error_report,
    observer_step,
    run_observer,
    save_run,
)


class TestObserverStep:
    def test_homogeneous_decay(self):
        lam = np.array([0.5, 0.25])
        z = observer_step(np.array([1.0, 1.0]), 0.0, lam, 0.1)
        assert np.allclose(z, np.exp(-lam * 0.1))

    def test_fixed_point_is_y_over_lambda(self):
        lam = np.array([0.5, 0.25])
        z = np.zeros(2)
        for _ in range(3000):
            z = observer_step(z, 2.0, lam, 0.1)
        assert np.allclose(z, 2.0 / lam, atol=1e-12)

    def test_worked_example(self):
        # One step from z = (1, 1) with y = 1, rates (0.5, 0.25), dt = 0.1.
        z = observer_step(np.array([1.0, 1.0]), 1.0, np.array([0.5, 0.25]), 0.1)
        e1, e2 = math.exp(-0.05), math.exp(-0.025)
        expected = np.array([e1 + (1 - e1) / 0.5, e2 + (1 - e2) / 0.25])
        assert np.allclose(z, expected, atol=1e-12)
        assert z[0] == pytest.approx(1.04877, abs=1e-5)

    @settings(max_examples=50)
    @given(
        lam=st.floats(0.05, 3.0),
        dt=st.floats(0.01, 0.5),
        k=st.integers(1, 50),
        z0=st.floats(-3.0, 3.0),
        y=st.floats(-3.0, 3.0),
    )
    def test_composition_matches_closed_form(self, lam, dt, k, z0, y):
        # k steps under constant y equal the exact solution at time k*dt.
        lam_v = np.array([lam])
        z = np.array([z0])
        for _ in range(k):
            z = observer_step(z, y, lam_v, dt)
        closed = math.exp(-lam * k * dt) * (z0 - y / lam) + y / lam
        assert z[0] == pytest.approx(closed, rel=1e-12, abs=1e-12)


def _exact_linear_model(lambdas=(0.5, 0.25)):
    """Handcrafted injection model with T_j(x) = x1 / lambda_j, exact for
    any system with a constant first coordinate and h(x) = x1."""
    basis = build_basis(2, 1)
    lattice = build_lattice(-1.0, 1.0, 0, 0)
    const = np.zeros(3, dtype=complex)
    const[0] = 1.0
    x1_fun = np.zeros(3, dtype=complex)
    x1_fun[1] = 1.0
    real_factors = (Eigenfunction(mu=0j, beta=x1_fun, basis=basis, rms_scale=1.0, defect=0.0),)
    imag_factors = (Eigenfunction(mu=0j, beta=const, basis=basis, rms_scale=1.0, defect=0.0),)
    lam = np.asarray(lambdas, dtype=float)
    b = (1.0 / lam)[:, None].astype(complex)
    return InjectionModel(
        basis=basis,
        lattice=lattice,
        real_factors=real_factors,
        imag_factors=imag_factors,
        lambdas=lam,
        b=b,
        fit_rmse=np.zeros(len(lam)),
        ridge=0.0,
    )


def _constant_output_field() -> VectorField:
    return VectorField(dim=2, rhs=lambda x: np.array([0.0, -x[1]]))


class TestRunObserver:
    def test_exact_model_tracks_transformed_state(self):
        # Observer starts on the true transformed trajectory and both sides
        # follow the same filter driven by the same output, so err_z stays 0.
        injection = _exact_linear_model()
        x_grid = np.column_stack([np.linspace(0.5, 2.5, 15), np.ones(15)])
        krr = fit_inverse(injection, x_grid, length_scale=2.0, xi=1e-8)
        cfg = ObserverConfig(
            lambdas=np.array([0.5, 0.25]),
            x0_true=np.array([1.3, 2.0]),
            x0_hat=np.array([1.3, 2.0]),
            duration=5.0,
            dt=0.1,
        )
        run = run_observer(_constant_output_field(), OutputMap(0), injection, krr, cfg)
        assert np.all(run.err_z < 1e-6)
        assert run.err_z[0] == 0.0

    def test_initial_z_is_injection_of_x0_hat(self):
        injection = _exact_linear_model()
        x_grid = np.column_stack([np.linspace(0.5, 2.5, 15), np.ones(15)])
        krr = fit_inverse(injection, x_grid, length_scale=2.0, xi=1e-8)
        cfg = ObserverConfig(
            lambdas=np.array([0.5, 0.25]),
            x0_true=np.array([1.3, 2.0]),
            x0_hat=np.array([0.9, 2.0]),
            duration=1.0,
            dt=0.1,
        )
        run = run_observer(_constant_output_field(), OutputMap(0), injection, krr, cfg)
        assert np.allclose(run.z[0], [0.9 / 0.5, 0.9 / 0.25])

    def test_mismatched_rates_rejected(self):
        injection = _exact_linear_model()
        x_grid = np.column_stack([np.linspace(0.5, 2.5, 5), np.ones(5)])
        krr = fit_inverse(injection, x_grid, length_scale=2.0, xi=1e-8)
        cfg = ObserverConfig(
            lambdas=np.array([0.5, 0.26]),
            x0_true=np.array([1.3, 2.0]),
            x0_hat=np.array([1.3, 2.0]),
            duration=1.0,
            dt=0.1,
        )
        with pytest.raises(ConfigError):
            run_observer(_constant_output_field(), OutputMap(0), injection, krr, cfg)


def test_flow_match_for_exact_injection():
    # For xdot = mu x and T(x) = x/(mu+lambda), the continuous-time filter
    # equation holds identically along any trajectory.
    mu, lam = -1.0, 0.5
    x = np.linspace(0.1, 2.0, 200)
    T = x / (mu + lam)
    dT_dt = mu * x / (mu + lam)  # gradient of T times the vector field
    residual = dT_dt - (-lam * T + x)
    assert np.sqrt(np.mean(residual**2)) < 1e-6


def test_contraction_slope_matches_slowest_rate():
    lam = np.array([0.5, 0.25])
    dt = 0.1
    steps = int(round(20.0 / dt))
    za, zb = np.array([1.0, 1.0]), np.array([0.0, 0.0])
    diffs = [za - zb]
    rng_y = np.sin(np.arange(steps))  # arbitrary shared drive cancels exactly
    for k in range(steps):
        za = observer_step(za, rng_y[k], lam, dt)
        zb = observer_step(zb, rng_y[k], lam, dt)
        diffs.append(za - zb)
    t = np.arange(steps + 1) * dt
    slope = np.polyfit(t, np.log(np.linalg.norm(diffs, axis=1)), 1)[0]
    assert abs(slope - (-0.25)) / 0.25 < 0.05


def _synthetic_run(t, err_state):
    n = len(t)
    zeros2 = np.zeros((n, 2))
    return ObserverRun(
        t=t,
        x_true=zeros2,
        y=np.zeros(n),
        z=zeros2,
        T_of_x=zeros2,
        T_of_xhat=zeros2,
        x_hat=zeros2,
        err_state=err_state,
        err_z=np.zeros(n),
        hull_dist=np.zeros(n),
    )


class TestErrorReport:
    def test_all_zero(self):
        t = np.linspace(0.0, 10.0, 101)
        report = error_report(_synthetic_run(t, np.zeros(101)))
        assert report == ErrorReport(5.0, 0.0, 0.0, 0.0, 0.0)

    def test_linear_decay_mean_is_window_midpoint(self):
        t = np.linspace(0.0, 10.0, 101)
        err = 1.0 - t / 10.0
        report = error_report(_synthetic_run(t, err))
        midpoint_value = 1.0 - 7.5 / 10.0
        assert report.err_state_mean == pytest.approx(midpoint_value)
        assert report.err_state_max == pytest.approx(0.5)

    def test_window_max_bounded_by_full_max(self):
        rng = np.random.default_rng(0)
        t = np.linspace(0.0, 10.0, 101)
        err = rng.uniform(size=101)
        report = error_report(_synthetic_run(t, err))
        assert report.err_state_max <= err.max()


def test_save_run_round_trips(tmp_path):
    injection = _exact_linear_model()
    x_grid = np.column_stack([np.linspace(0.5, 2.5, 8), np.ones(8)])
    krr = fit_inverse(injection, x_grid, length_scale=2.0, xi=1e-8)
    cfg = ObserverConfig(
        lambdas=np.array([0.5, 0.25]),
        x0_true=np.array([1.3, 2.0]),
        x0_hat=np.array([1.0, 2.0]),
        duration=2.0,
        dt=0.1,
    )
    run = run_observer(_constant_output_field(), OutputMap(0), injection, krr, cfg)
    path = tmp_path / "run.csv"
    save_run(run, path)
    header = path.read_text().splitlines()[0]
    assert header == "t,x1,x2,y,z1,z2,Tx1,Tx2,xhat1,xhat2,err_state,err_z,hull_dist"
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert np.array_equal(data["t"], run.t)
    assert np.array_equal(data["z1"], run.z[:, 0])
    assert np.array_equal(data["err_state"], run.err_state)
    assert np.array_equal(data["hull_dist"], run.hull_dist)
