import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kkl_observer.basis import build_basis
from kkl_observer.injection import build_lattice, fit_injection
from kkl_observer.inverse import (
    KrrModel,
    eval_inverse,
    fit_inverse,
    laplace_kernel,
    nearest_training_distance,
)
from kkl_observer.linalg import hermitian_eigenvalues

from conftest import exact_flow_pairs


@pytest.fixture(scope="module")
def linear_model():
    """Injection model for xdot = -x whose T is near -2x (injective in 1-D)."""
    pairs = exact_flow_pairs(0.1)
    lattice = build_lattice(-1.0, 1.0, 1, 0)
    return fit_injection(build_basis(1, 3), pairs, lattice, [0.5])


class TestLaplaceKernel:
    def test_zero_distance(self):
        z = np.array([1.0, 2.0])
        assert laplace_kernel(z, z, 2.0) == 1.0

    def test_known_value(self):
        assert laplace_kernel(np.array([0.0, 0.0]), np.array([0.0, 2.0]), 2.0) == pytest.approx(
            np.exp(-1.0)
        )

    @given(
        a=st.lists(st.floats(-5, 5), min_size=2, max_size=2),
        b=st.lists(st.floats(-5, 5), min_size=2, max_size=2),
        l=st.floats(0.1, 5.0),
    )
    def test_symmetry_and_range(self, a, b, l):
        za, zb = np.array(a), np.array(b)
        v = laplace_kernel(za, zb, l)
        assert v == laplace_kernel(zb, za, l)
        assert 0.0 < v <= 1.0

    def test_rejects_bad_length_scale(self):
        with pytest.raises(ValueError):
            laplace_kernel(np.zeros(2), np.ones(2), 0.0)


class TestFitInverse:
    def test_single_point_closed_form(self, linear_model):
        xi = 0.3
        x = np.array([[1.5]])
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=xi)
        assert np.allclose(model.alpha, x / (1.0 + xi))
        # prediction at any z: x1 * exp(-|z - z1|/l) / (1 + xi)
        z_probe = model.z_points + 0.7
        expected = x[0, 0] * np.exp(-0.7 / 2.0) / (1.0 + xi)
        assert eval_inverse(model, z_probe)[0, 0] == pytest.approx(expected)

    def test_huge_ridge_shrinks_alpha(self, linear_model):
        x = np.linspace(0.2, 1.8, 20)[:, None]
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=1e12)
        assert np.max(np.abs(model.alpha)) < 1e-10

    def test_interpolation_at_ridgeless_fit(self, linear_model):
        x = np.linspace(0.2, 1.8, 25)[:, None]
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=0.0)
        recon = eval_inverse(model, model.z_points)
        assert np.max(np.abs(recon - x)) < 1e-6

    def test_far_field_decays(self, linear_model):
        x = np.linspace(0.2, 1.8, 25)[:, None]
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=1e-8)
        z_far = model.z_points.max(axis=0, keepdims=True) + 100.0
        pred = eval_inverse(model, z_far)
        bound = 1e-6 * np.max(np.abs(model.alpha)) * len(x)
        assert np.max(np.abs(pred)) < bound

    def test_near_duplicate_warning(self, linear_model):
        x = np.array([[1.0], [1.0 + 1e-15]])
        with pytest.warns(UserWarning, match="near-duplicate"):
            fit_inverse(linear_model, x, length_scale=2.0, xi=1e-6)

    def test_gaussian_kernel_variant(self, linear_model):
        x = np.linspace(0.2, 1.8, 10)[:, None]
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=1e-8, kernel_kind="gaussian")
        assert model.kernel_kind == "gaussian"
        recon = eval_inverse(model, model.z_points)
        assert np.max(np.abs(recon - x)) < 1e-3

    def test_unknown_kernel_rejected(self, linear_model):
        with pytest.raises(ValueError):
            fit_inverse(linear_model, np.ones((3, 1)), 2.0, kernel_kind="cubic")


class TestKernelMatrixProperties:
    def test_positive_definite(self, linear_model):
        x = np.linspace(0.2, 1.8, 60)[:, None]
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=0.0)
        D = np.abs(model.z_points - model.z_points.T)
        Q = np.exp(-D / 2.0)
        w = hermitian_eigenvalues(Q)
        assert w[0] > -1e-10

    def test_first_order_condition(self, linear_model):
        x = np.linspace(0.2, 1.8, 40)[:, None]
        xi = 1e-8
        model = fit_inverse(linear_model, x, length_scale=2.0, xi=xi)
        D = np.abs(model.z_points - model.z_points.T)
        Q = np.exp(-D / 2.0)
        residual = (Q + len(x) * xi * np.eye(len(x))) @ model.alpha - x
        assert np.linalg.norm(residual) < 1e-8 * np.linalg.norm(x)

    def test_ridge_monotonicity(self, linear_model):
        x = np.linspace(0.2, 1.8, 40)[:, None]
        rmses = []
        for xi in (0.0, 1e-8, 1e-4, 1e-2):
            model = fit_inverse(linear_model, x, length_scale=2.0, xi=xi)
            recon = eval_inverse(model, model.z_points)
            rmses.append(float(np.sqrt(np.mean(np.sum((recon - x) ** 2, axis=1)))))
        for lo, hi in zip(rmses, rmses[1:]):
            assert hi >= lo - 1e-12


def test_nearest_training_distance(linear_model):
    x = np.linspace(0.2, 1.8, 10)[:, None]
    model = fit_inverse(linear_model, x, length_scale=2.0, xi=1e-8)
    d = nearest_training_distance(model, model.z_points)
    assert np.allclose(d, 0.0)
    d_off = nearest_training_distance(model, model.z_points + 0.01)
    assert np.all(d_off <= 0.01 + 1e-12)
    assert np.all(d_off > 0.0)


def test_eval_inverse_shapes(linear_model):
    x = np.linspace(0.2, 1.8, 10)[:, None]
    model = fit_inverse(linear_model, x, length_scale=2.0, xi=1e-8)
    out = eval_inverse(model, model.z_points[:4])
    assert out.shape == (4, 1)
