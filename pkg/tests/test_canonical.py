"""Tests for canonical symbol constructors."""

import pytest

from berezin_kit.canonical import (
    canonical_cs_symbols_J,
    canonical_cs_symbols_rotation,
    canonical_hermitian_symbols,
    canonical_sa_symbols,
    compdiff_operator,
    sum_operator,
)
from berezin_kit.errors import SelfMapError
from berezin_kit.jets import LftSymbol, WeightSymbol
from berezin_kit.kernels import SpaceSpec


class TestCanonicalSymbols:
    """Tests for the canonical constructors."""

    def setup_method(self):
        self.space = SpaceSpec(1, 2)

    def test_j_symbols(self):
        weights, lfts = canonical_cs_symbols_J(self.space, 1, 0.3, 0.4)
        assert lfts == (LftSymbol(0.3, 0.4, 0.3),)
        assert weights == (WeightSymbol(1.0, 1, 0.3, 3),)

    def test_j_symbols_amplitude_on_first_factor(self):
        weights, _ = canonical_cs_symbols_J(SpaceSpec(2, 1), (0, 1), [0.2, 0.1], 0.3, a=2)
        assert weights[0].a == 2
        assert weights[1].a == 1
        assert weights[1].s == 2

    def test_non_self_map(self):
        with pytest.raises(SelfMapError, match="self_map_margin"):
            canonical_cs_symbols_J(self.space, 1, 0.5, 0.9)

    def test_vector_length(self):
        with pytest.raises(ValueError):
            canonical_cs_symbols_J(SpaceSpec(2, 1), (1, 1), [0.1, 0.2, 0.3], 0.2)

    def test_sa_symbols_use_conjugate_pole(self):
        weights, lfts = canonical_sa_symbols(self.space, 1, 0.2 + 0.1j, 0.3)
        assert lfts[0].c == 0.2 - 0.1j
        assert weights[0].c == 0.2 - 0.1j

    def test_sa_symbols_need_real_slope(self):
        with pytest.raises(ValueError):
            canonical_sa_symbols(self.space, 1, 0.2, 0.3j)
        with pytest.raises(ValueError):
            canonical_sa_symbols(self.space, 1, 0.2, 0.3, a=1j)

    def test_rotation_symbols(self):
        weights, phi = canonical_cs_symbols_rotation(1, -1, 0.3, 0.2, [1, 0.5])
        assert phi.c == -0.3
        assert [(w.n, w.s) for w in weights] == [(1, 2), (2, 3)]
        assert weights[1].a == 0.5

    def test_rotation_needs_unimodular_xi(self):
        with pytest.raises(ValueError):
            canonical_cs_symbols_rotation(1, 0.5, 0.3, 0.2, [1])
        with pytest.raises(ValueError):
            canonical_cs_symbols_rotation(1, 1, 0.3, 0.2, [])

    def test_hermitian_needs_real_coefficients(self):
        with pytest.raises(ValueError):
            canonical_hermitian_symbols(2, 0.3j, 0.2, [1j])

    def test_operators(self):
        op = compdiff_operator(self.space, 1, canonical_cs_symbols_J(self.space, 1, 0.3, 0.4))
        assert op.n.orders == (1,)
        total = sum_operator(2, canonical_hermitian_symbols(2, 0.3j, 0.2, [1, -0.5]))
        assert [t.order for t in total.summands] == [1, 2]
