"""Tests for operators, kernel actions and finite sections."""

import numpy as np
import pytest

from berezin_kit.canonical import canonical_cs_symbols_J, compdiff_operator
from berezin_kit.certify import residual
from berezin_kit.conjugations import StandardConjugation, WeightedCompositionConjugation
from berezin_kit.errors import SelfMapError, UnsupportedFeatureError
from berezin_kit.jets import LftSymbol, ProductSymbol, TruncatedSeries, WeightSymbol
from berezin_kit.kernels import SpaceSpec, kernel_coefficients, reproduce_derivative, reproduce_eval
from berezin_kit.operators import (
    CompositionDifferentiationOperator,
    CompositionOperator,
    GeneralizedSumOperator,
    OperatorMatrix,
    SumTerm,
    WeightedCompositionOperator,
    adjoint_kernel_action,
    adjoint_on_kernel,
    apply_on_kernel,
    create_operator,
    kernel_action,
    operator_matrix,
)
from berezin_kit.sampling import make_rng, point_pairs


def _disk_point(rng, radius: float) -> complex:
    return complex(radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))


def _random_operator(rng, gamma: int):
    """A D_{n, psi, phi} with n >= 1 or a generalized sum, with poles of psi and phi outside |z| = 2."""
    space = SpaceSpec(1, gamma)
    phi = LftSymbol(_disk_point(rng, 0.3), _disk_point(rng, 0.3), _disk_point(rng, 0.5))

    def weight():
        return WeightSymbol(
            _disk_point(rng, 1.0) + 0.5, int(rng.integers(2)), _disk_point(rng, 0.5), int(rng.integers(1, 3))
        )

    if rng.random() < 0.5:
        return CompositionDifferentiationOperator(space, int(rng.integers(1, 3)), weight(), phi)
    count = int(rng.integers(1, 4))
    summands = tuple(SumTerm(_disk_point(rng, 1.0), j, weight()) for j in range(1, count + 1))
    return GeneralizedSumOperator(space, summands, phi)


class TestOperatorSpecs:
    """Tests for operator construction."""

    def test_rejects_non_self_map(self):
        with pytest.raises(SelfMapError):
            CompositionOperator(SpaceSpec(1, 1), LftSymbol.linear(1.2))

    def test_rejects_zero_weight(self):
        with pytest.raises(ValueError):
            WeightedCompositionOperator(SpaceSpec(1, 1), TruncatedSeries([0, 0]), LftSymbol.identity())

    def test_factor_count(self):
        with pytest.raises(ValueError):
            CompositionOperator(SpaceSpec(2, 1), LftSymbol.linear(0.5))

    def test_sum_is_one_variable(self):
        term = SumTerm(1.0, 1, WeightSymbol.constant())
        with pytest.raises(ValueError):
            GeneralizedSumOperator(SpaceSpec(2, 1), (term,), LftSymbol.identity())

    def test_sum_term_order(self):
        with pytest.raises(ValueError):
            SumTerm(1.0, 0, WeightSymbol.constant())

    def test_factory(self):
        op = create_operator("composition", SpaceSpec(1, 2), phi=LftSymbol.linear(0.5))
        assert isinstance(op, CompositionOperator)
        with pytest.raises(ValueError):
            create_operator("bogus", SpaceSpec(1, 1))


class TestKernelActions:
    """Tests for closed-form actions on kernels."""

    def setup_method(self):
        self.op = CompositionOperator(SpaceSpec(1, 2), LftSymbol.linear(0.5))

    def test_adjoint_moves_kernel_point(self):
        # C_phi* K_w = K_phi(w), phi(0.6) = 0.3
        value = adjoint_kernel_action(self.op, np.array([[0.6]]), np.array([[0.5]]))
        assert value[0] == pytest.approx(0.85**-2)

    def test_kernel_action_composes(self):
        # (C_phi K_w)(z) = K_w(phi(z))
        value = kernel_action(self.op, np.array([[0.6]]), np.array([[0.5]]))
        assert value[0] == pytest.approx(0.85**-2)

    def test_adjoint_on_kernel_evaluator(self):
        evaluator = adjoint_on_kernel(self.op, 0.6)
        assert evaluator(0.5) == pytest.approx(0.85**-2)

    def test_action_matches_finite_section(self):
        space = SpaceSpec(1, 2)
        op = WeightedCompositionOperator(space, WeightSymbol(1.0, 1), LftSymbol.blaschke(0.5))
        T = operator_matrix(op, 64)
        image = T.apply_to_series(TruncatedSeries(kernel_coefficients(2, 0.3, 63)))
        expected = kernel_action(op, np.array([[0.3]]), np.array([[0.2]]))[0]
        assert image(0.2) == pytest.approx(expected, abs=1e-10)

    def test_matrix_path_matches_closed_form_adjoint(self):
        # <T p, K_w> from the N = 96 section against <p, T* K_w> = sum a psi(w) p^(n)(phi(w))
        rng = make_rng(11)
        worst = 0.0
        for case in range(50):
            op = _random_operator(rng, 1 + case % 3)
            T = operator_matrix(op, 96)
            p = TruncatedSeries([_disk_point(rng, 1.0) for _ in range(int(rng.integers(3, 12)))])
            w = _disk_point(rng, 0.5)
            matrix_side = reproduce_eval(op.space, T.apply_to_series(p), w)
            closed_side = sum(
                term.a
                * term.psi[0](w)
                * reproduce_derivative(op.space, p, term.orders[0], term.phi[0](w))
                for term in op.terms()
            )
            worst = max(worst, residual([matrix_side], [closed_side]))
        assert worst < 1e-9

    def test_kernel_images_match_finite_section(self):
        rng = make_rng(12)
        worst = 0.0
        for case in range(50):
            gamma = 1 + case % 3
            op = _random_operator(rng, gamma)
            T = operator_matrix(op, 96)
            u, z = _disk_point(rng, 0.5), _disk_point(rng, 0.5)
            image = T.apply_to_series(TruncatedSeries(kernel_coefficients(gamma, u, 95)))
            expected = kernel_action(op, np.array([[np.conj(u)]]), np.array([[z]]))[0]
            worst = max(worst, residual([image(z)], [expected]))
        assert worst < 1e-9


class TestApplyOnKernel:
    """Tests for the two sides of the symmetry identity on kernels."""

    def setup_method(self):
        self.space = SpaceSpec(2, 2)
        self.orders = (1, 0)
        self.symbols = canonical_cs_symbols_J(self.space, self.orders, [0.2 + 0.1j, -0.3], [0.3, 0.25j])
        self.z, self.w = point_pairs(2, 50, 0.8, seed=3)

    def _worst(self, op) -> float:
        worst = 0.0
        for k in range(self.w.shape[1]):
            lhs, rhs = apply_on_kernel(op, StandardConjugation(), self.w[:, k])
            worst = max(worst, residual(lhs.evaluate_many(self.z), rhs.evaluate_many(self.z)))
        return worst

    def test_canonical_sides_agree(self):
        op = compdiff_operator(self.space, self.orders, self.symbols)
        assert self._worst(op) < 1e-11

    def test_identity_operator(self):
        op = CompositionOperator(self.space, (LftSymbol.identity(),) * 2)
        w, z = (0.3, 0.2j), (0.5, -0.4)
        lhs, rhs = apply_on_kernel(op, StandardConjugation(), w)
        expected = 1 / ((1 - 0.15) * (1 + 0.08j)) ** 2
        assert lhs(z) == pytest.approx(expected, abs=1e-14)
        assert rhs(z) == pytest.approx(expected, abs=1e-14)
        # symmetric in (z, w)
        swapped, _ = apply_on_kernel(op, StandardConjugation(), z)
        assert swapped(w) == pytest.approx(expected, abs=1e-14)

    def test_perturbed_weight_breaks_identity(self):
        weights, lfts = self.symbols
        perturbed = (ProductSymbol((weights[0], TruncatedSeries([1.0, 0.1]))), weights[1])
        op = CompositionDifferentiationOperator(self.space, self.orders, perturbed, lfts)
        assert self._worst(op) > 1e-3

    def test_weighted_conjugation_is_unsupported(self):
        op = CompositionOperator(self.space, (LftSymbol.identity(),) * 2)
        with pytest.raises(UnsupportedFeatureError):
            apply_on_kernel(op, WeightedCompositionConjugation(), (0.1, 0.1))


class TestOperatorMatrix:
    """Tests for finite sections."""

    def test_linear_composition_is_diagonal(self):
        for gamma in (1, 2):
            T = operator_matrix(CompositionOperator(SpaceSpec(1, gamma), LftSymbol.linear(0.5)), 4)
            assert np.allclose(T.entries, np.diag([1, 0.5, 0.25, 0.125]))

    def test_identity(self):
        T = operator_matrix(CompositionOperator(SpaceSpec(1, 3), LftSymbol.identity()), 5)
        assert np.allclose(T.entries, OperatorMatrix.identity(5, 3).entries)

    def test_differentiation(self):
        op = CompositionDifferentiationOperator(
            SpaceSpec(1, 1), 1, WeightSymbol.constant(), LftSymbol.identity()
        )
        T = operator_matrix(op, 3)
        assert np.allclose(T.entries, [[0, 1, 0], [0, 0, 2], [0, 0, 0]])

    def test_apply_to_series(self):
        T = operator_matrix(CompositionOperator(SpaceSpec(1, 2), LftSymbol.linear(0.5)), 3)
        assert np.allclose(T.apply_to_series(TruncatedSeries([1, 1, 1])).coeffs, [1, 0.5, 0.25])

    def test_adjoint_and_sum(self):
        T = OperatorMatrix.from_array([[1, 2j], [0, 1]])
        S = T + T.adjoint()
        assert np.allclose(S.entries, [[2, 2j], [-2j, 2]])
        with pytest.raises(ValueError):
            T + OperatorMatrix.identity(3)

    def test_size_limits(self):
        op = CompositionOperator(SpaceSpec(1, 1), LftSymbol.identity())
        with pytest.raises(ValueError):
            operator_matrix(op, 0)
        with pytest.raises(ValueError):
            operator_matrix(op, 5000)
        with pytest.raises(ValueError):
            operator_matrix(CompositionOperator(SpaceSpec(2, 1), (LftSymbol.identity(),) * 2), 4)
