"""Tests for reproducing kernels."""

from fractions import Fraction

import numpy as np
import pytest

from berezin_kit.errors import DomainError
from berezin_kit.kernels import (
    DiskPoint,
    MultiIndex,
    PolyPoint,
    SpaceSpec,
    basis_norm_sq,
    derivative_kernel_coefficients,
    derivative_kernel_eval,
    ipow,
    kernel_coefficients,
    kernel_eval,
    kernel_norm,
    normalized_kernel_eval,
    reproduce_derivative,
    reproduce_eval,
)
from berezin_kit.sampling import make_rng


class TestSpaceSpec:
    """Tests for SpaceSpec and point validation."""

    def test_defaults_to_hardy(self):
        space = SpaceSpec()
        assert space.d == 1
        assert space.gamma == 1

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError):
            SpaceSpec(1, 0)
        with pytest.raises(ValueError):
            SpaceSpec(0, 1)

    def test_point_on_circle_is_domain_error(self):
        with pytest.raises(DomainError):
            DiskPoint(1.0)
        with pytest.raises(DomainError):
            PolyPoint.of(0.1, 1j)

    def test_domain_error_is_value_error(self):
        with pytest.raises(ValueError):
            DiskPoint(2.0)

    def test_multi_index(self):
        assert MultiIndex.of(1, 2).orders == (1, 2)
        assert MultiIndex.zeros(3).orders == (0, 0, 0)
        with pytest.raises(ValueError):
            MultiIndex.of(-1)


class TestKernelEval:
    """Tests for kernel evaluation."""

    def test_hardy_kernel(self):
        assert kernel_eval(SpaceSpec(1, 1), 0.5, 0.5) == pytest.approx(4 / 3)

    def test_bergman_kernel(self):
        assert kernel_eval(SpaceSpec(1, 2), 0.5, 0.5) == pytest.approx(16 / 9)

    def test_polydisk_kernel_is_product(self):
        space = SpaceSpec(2, 1)
        assert kernel_eval(space, (0.5, 0.5), (0.5, 0.5)) == pytest.approx(16 / 9)

    def test_kernel_conjugates_w(self):
        space = SpaceSpec(1, 1)
        # conj(0.5i) * 0.5i = 0.25
        assert kernel_eval(space, 0.5j, 0.5j) == pytest.approx(4 / 3)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            kernel_eval(SpaceSpec(2, 1), 0.5, (0.1, 0.2))

    def test_norm(self):
        assert kernel_norm(SpaceSpec(1, 1), 0.5) == pytest.approx(np.sqrt(4 / 3))
        assert kernel_norm(SpaceSpec(1, 3), 0.5) == pytest.approx(0.75**-1.5)
        assert kernel_norm(SpaceSpec(1, 2), 0.6) == pytest.approx(1.5625)
        assert kernel_norm(SpaceSpec(2, 2), (0.6, 0.5)) == pytest.approx(1 / 0.48)

    def test_normalized_kernel_at_origin(self):
        assert normalized_kernel_eval(SpaceSpec(1, 1), 0.5, 0) == pytest.approx(0.75**0.5)

    def test_derivative_kernel(self):
        space = SpaceSpec(1, 1)
        assert derivative_kernel_eval(space, 1, 0.5, 0.5) == pytest.approx(0.5 / 0.75**2)

    def test_derivative_kernel_order_zero(self):
        space = SpaceSpec(2, 2)
        w, z = (0.3, 0.2j), (0.1, -0.4)
        assert derivative_kernel_eval(space, (0, 0), w, z) == pytest.approx(kernel_eval(space, w, z))

    def test_ipow(self):
        assert ipow(2, 10) == 1024
        assert ipow(2, -1) == pytest.approx(0.5)
        assert np.allclose(ipow(np.array([1j, 2]), 2), [-1, 4])


class TestCoefficients:
    """Tests for basis norms and kernel coefficients."""

    def test_basis_norm_sq(self):
        assert basis_norm_sq(SpaceSpec(1, 1), 5) == Fraction(1)
        assert basis_norm_sq(SpaceSpec(1, 2), 1) == Fraction(1, 2)
        assert basis_norm_sq(SpaceSpec(1, 3), 2) == Fraction(1, 6)
        assert basis_norm_sq(SpaceSpec(2, 2), (1, 2)) == Fraction(1, 6)
        assert basis_norm_sq(SpaceSpec(1, 2), 3) == Fraction(1, 4)
        assert basis_norm_sq(SpaceSpec(2, 3), (1, 2)) == Fraction(1, 18)

    def test_kernel_coefficients(self):
        assert np.allclose(kernel_coefficients(1, 0.5, 3), [1, 0.5, 0.25, 0.125])
        assert np.allclose(kernel_coefficients(2, 0.5, 3), [1, 1, 0.75, 0.5])
        assert np.allclose(kernel_coefficients(1, 0.5j, 2), [1, -0.5j, -0.25])

    def test_reproduce_eval(self):
        assert reproduce_eval(SpaceSpec(1, 2), [1, 2], 0.25) == pytest.approx(1.5)
        assert reproduce_eval(SpaceSpec(1, 1), [0, 0, 0, 1], 0.2) == pytest.approx(0.008)

    def test_reproduce_eval_polydisk(self):
        coeffs = np.zeros((2, 2))
        coeffs[1, 1] = 1.0
        assert reproduce_eval(SpaceSpec(2, 1), coeffs, (0.2, 0.04)) == pytest.approx(0.008)

    def test_reproduce_eval_rank_mismatch(self):
        with pytest.raises(ValueError):
            reproduce_eval(SpaceSpec(2, 1), [1, 2], (0.1, 0.1))

    def test_reproduce_derivative(self):
        # f = z^3, f'(0.5) = 0.75
        value = reproduce_derivative(SpaceSpec(1, 2), [0, 0, 0, 1], 1, 0.5)
        assert value == pytest.approx(0.75)


class TestKernelInvariants:
    """Seeded checks of the reproducing property and kernel symmetries."""

    def setup_method(self):
        self.rng = make_rng(5)

    def _points(self, count: int, radius: float) -> np.ndarray:
        r = radius * np.sqrt(self.rng.random(count))
        return r * np.exp(2j * np.pi * self.rng.random(count))

    def test_reproducing_property(self):
        worst = 0.0
        for gamma in (1, 2, 3, 5):
            space = SpaceSpec(1, gamma)
            for w in self._points(25, 0.9):
                degree = int(self.rng.integers(0, 33))
                coeffs = self._points(degree + 1, 1.0)
                direct = np.polynomial.polynomial.polyval(w, coeffs)
                worst = max(worst, abs(reproduce_eval(space, coeffs, w) - direct))
        assert worst < 1e-10

    def test_reproducing_derivative(self):
        worst = 0.0
        for gamma in (1, 2, 3):
            space = SpaceSpec(1, gamma)
            for w in self._points(30, 0.9):
                coeffs = self._points(int(self.rng.integers(3, 33)), 1.0)
                n = int(self.rng.integers(1, 3))
                direct = np.polynomial.polynomial.polyval(w, np.polynomial.polynomial.polyder(coeffs, n))
                value = reproduce_derivative(space, coeffs, n, w)
                worst = max(worst, abs(value - direct) / max(1.0, abs(direct)))
        assert worst < 1e-10

    def test_derivative_kernel_is_conj_w_derivative(self):
        # K^[1]_w(z) = d/d(conj w) K_w(z)
        space = SpaceSpec(1, 2)
        h = 1e-5
        for w, z in zip(self._points(20, 0.7), self._points(20, 0.7)):
            difference = (kernel_eval(space, w + h, z) - kernel_eval(space, w - h, z)) / (2 * h)
            assert derivative_kernel_eval(space, 1, w, z) == pytest.approx(difference, rel=1e-7, abs=1e-9)

    def test_derivative_kernel_matches_coefficients(self):
        for gamma, n in ((1, 1), (2, 2), (3, 1)):
            space = SpaceSpec(1, gamma)
            w, z = 0.4 - 0.3j, 0.2 + 0.5j
            series = np.polynomial.polynomial.polyval(z, derivative_kernel_coefficients(gamma, n, w, 200))
            assert derivative_kernel_eval(space, n, w, z) == pytest.approx(series, rel=1e-12)

    def test_hermitian_symmetry(self):
        space = SpaceSpec(2, 3)
        w, z = self._points(40, 0.9).reshape(2, 20), self._points(40, 0.9).reshape(2, 20)
        for k in range(20):
            forward = kernel_eval(space, w[:, k], z[:, k])
            backward = kernel_eval(space, z[:, k], w[:, k])
            assert forward == pytest.approx(np.conj(backward), rel=1e-14)

    def test_norm_grows_toward_boundary(self):
        for gamma in (1, 2, 3):
            space = SpaceSpec(1, gamma)
            for theta in (0.0, 1.0, 2.5):
                norms = [kernel_norm(space, r * np.exp(1j * theta)) for r in (0.0, 0.5, 0.9, 0.99, 0.999)]
                assert norms[0] == pytest.approx(1.0)
                assert all(value > 0 for value in norms)
                assert all(b > a for a, b in zip(norms, norms[1:]))
