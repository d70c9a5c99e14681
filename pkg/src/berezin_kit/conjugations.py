"""Conjugations: anti-linear, involutive, isometric maps on H_gamma."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import UnsupportedFeatureError
from .jets import TruncatedSeries

# |mu| and |xi| must be 1 to this accuracy.
UNIMODULAR_TOLERANCE = 1e-14


class ConjugationSpec(ABC):
    """Abstract base class for conjugations."""

    @abstractmethod
    def diagonal(self, count: int) -> np.ndarray:
        """Factors u_k with C: a_k -> u_k conj(a_k) on the first ``count`` coefficients."""
        pass

    @abstractmethod
    def kernel_parameters(self, d: int) -> tuple[complex, complex]:
        """(mu, xi) such that C K_w = mu K_v with conj(v) = xi w, coordinatewise."""
        pass

    def coeff_map(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex)
        return self.diagonal(coeffs.size) * np.conj(coeffs)


@dataclass(frozen=True)
class StandardConjugation(ConjugationSpec):
    """J f(z) = conj(f(conj(z)))."""

    def diagonal(self, count: int) -> np.ndarray:
        return np.ones(count, dtype=complex)

    def kernel_parameters(self, d: int) -> tuple[complex, complex]:
        return 1 + 0j, 1 + 0j

    def coeff_map(self, coeffs: np.ndarray) -> np.ndarray:
        # J acts on a coefficient tensor of any rank
        return np.conj(np.asarray(coeffs, dtype=complex))


@dataclass(frozen=True)
class RotationConjugation(ConjugationSpec):
    """C f(z) = mu conj(f(conj(xi z))) with |mu| = |xi| = 1; one variable only."""

    mu: complex = 1 + 0j
    xi: complex = 1 + 0j

    def __post_init__(self):
        for name in ("mu", "xi"):
            value = complex(getattr(self, name))
            if abs(abs(value) - 1) > UNIMODULAR_TOLERANCE:
                raise ValueError(f"{name} must be unimodular, got |{name}| = {abs(value):.17g}")
            object.__setattr__(self, name, value)

    def diagonal(self, count: int) -> np.ndarray:
        powers = np.ones(count, dtype=complex)
        if count > 1:
            powers[1:] = np.cumprod(np.full(count - 1, self.xi, dtype=complex))
        return self.mu * powers

    def kernel_parameters(self, d: int) -> tuple[complex, complex]:
        if d != 1:
            raise ValueError(f"rotation conjugations act on one variable, got d = {d}")
        return self.mu, self.xi


@dataclass(frozen=True)
class WeightedCompositionConjugation(ConjugationSpec):
    """A f(z) = u(z) conj(f(conj(v(z)))); carried as data only."""

    u: Any = None
    v: Any = None

    def diagonal(self, count: int) -> np.ndarray:
        raise UnsupportedFeatureError("weighted composition conjugations have no coefficient map")

    def kernel_parameters(self, d: int) -> tuple[complex, complex]:
        raise UnsupportedFeatureError("weighted composition conjugations have no kernel action")


def create_conjugation(kind: str, **params) -> ConjugationSpec:
    """Factory function to create a conjugation by name."""
    kind = kind.lower()

    if kind in ("j", "standard"):
        return StandardConjugation()
    elif kind == "rotation":
        return RotationConjugation(params.get("mu", 1), params.get("xi", 1))
    elif kind == "weighted":
        return WeightedCompositionConjugation(params.get("u"), params.get("v"))
    else:
        raise ValueError(f"Unknown conjugation: {kind}")


def conjugation_coeff_map(conj: ConjugationSpec, coeffs: TruncatedSeries) -> TruncatedSeries:
    """
    Apply a conjugation to Taylor coefficients.

    J sends a_k to conj(a_k); the rotation conjugation sends a_k to mu xi^k conj(a_k).
    """
    return TruncatedSeries(conj.coeff_map(coeffs.coeffs))
