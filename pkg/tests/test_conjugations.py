"""Tests for conjugations."""

import numpy as np
import pytest

from berezin_kit.conjugations import (
    RotationConjugation,
    StandardConjugation,
    WeightedCompositionConjugation,
    conjugation_coeff_map,
    create_conjugation,
)
from berezin_kit.errors import UnsupportedFeatureError
from berezin_kit.jets import TruncatedSeries
from berezin_kit.kernels import basis_norms
from berezin_kit.sampling import make_rng


class TestConjugations:
    """Tests for coefficient maps and the factory."""

    def setup_method(self):
        self.rotation = RotationConjugation(mu=1j, xi=-1)

    def test_standard_coeff_map(self):
        mapped = conjugation_coeff_map(StandardConjugation(), TruncatedSeries([1 + 1j, 2j]))
        assert np.allclose(mapped.coeffs, [1 - 1j, -2j])

    def test_rotation_diagonal(self):
        assert np.allclose(self.rotation.diagonal(3), [1j, -1j, 1j])

    def test_rotation_coeff_map(self):
        conj = RotationConjugation(mu=1, xi=-1)
        assert np.allclose(conj.coeff_map([1, 1j, 2]), [1, 1j, 2])

    def test_involution(self):
        a = np.array([0.3 + 0.1j, -1j, 2.0, 0.5 - 0.5j])
        assert np.allclose(self.rotation.coeff_map(self.rotation.coeff_map(a)), a)

    def test_rotation_needs_unimodular(self):
        with pytest.raises(ValueError):
            RotationConjugation(mu=2)

    def test_rotation_is_one_variable(self):
        assert self.rotation.kernel_parameters(1) == (1j, -1)
        with pytest.raises(ValueError):
            self.rotation.kernel_parameters(2)

    def test_weighted_is_data_only(self):
        with pytest.raises(UnsupportedFeatureError):
            WeightedCompositionConjugation().diagonal(3)

    def test_factory(self):
        assert isinstance(create_conjugation("J"), StandardConjugation)
        conj = create_conjugation("rotation", mu=-1, xi=1j)
        assert conj.mu == -1
        assert conj.xi == 1j
        with pytest.raises(ValueError):
            create_conjugation("bogus")

    def test_isometric_in_every_space(self):
        rng = make_rng(9)
        conjugations = [StandardConjugation(), self.rotation] + [
            RotationConjugation(mu=np.exp(2j * np.pi * rng.random()), xi=np.exp(2j * np.pi * rng.random()))
            for _ in range(5)
        ]
        for gamma in (1, 2, 3):
            weights = basis_norms(gamma, 16) ** 2
            for conj in conjugations:
                a = np.sqrt(rng.random(16)) * np.exp(2j * np.pi * rng.random(16))
                mapped = conjugation_coeff_map(conj, TruncatedSeries(a)).coeffs
                before = np.sum(np.abs(a) ** 2 * weights)
                after = np.sum(np.abs(mapped) ** 2 * weights)
                assert after == pytest.approx(before, rel=1e-14)
                assert np.allclose(conj.coeff_map(mapped), a, rtol=0, atol=1e-14)
