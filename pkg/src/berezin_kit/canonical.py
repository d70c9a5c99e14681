"""Canonical symbols for complex symmetric, self-adjoint and Hermitian operators."""

import logging
from typing import Sequence, Union

import numpy as np

from .conjugations import UNIMODULAR_TOLERANCE
from .errors import SelfMapError
from .jets import LftSymbol, WeightSymbol, self_map_margin
from .kernels import IndexLike, SpaceSpec, as_orders
from .operators import (
    CompositionDifferentiationOperator,
    GeneralizedSumOperator,
    SumTerm,
)

logger = logging.getLogger(__name__)

# Imaginary parts below this count as zero for parameters that must be real.
REAL_TOLERANCE = 1e-14

ComplexVector = Union[complex, Sequence[complex]]


def _vector(values: ComplexVector, d: int, name: str) -> list[complex]:
    if isinstance(values, (int, float, complex, np.number)):
        values = [values]
    values = [complex(v) for v in values]
    if len(values) == 1 and d > 1:
        values = values * d
    if len(values) != d:
        raise ValueError(f"{name} needs {d} entries, got {len(values)}")
    return values


def _real(value: complex, name: str) -> float:
    value = complex(value)
    if abs(value.imag) > REAL_TOLERANCE:
        raise ValueError(f"{name} must be real, got {value}")
    return value.real


def _checked_lft(b0: complex, b1: complex, c: complex) -> LftSymbol:
    phi = LftSymbol(b0, b1, c)
    margin = self_map_margin(phi)
    if margin <= 0:
        raise SelfMapError(
            margin,
            f"phi(z) = {b0} + {b1} z / (1 - ({c}) z) is not a self-map of the disk "
            f"(self_map_margin={margin:.6g})",
        )
    logger.debug("accepted %r with self_map_margin %.6g", phi, margin)
    return phi


def canonical_cs_symbols_J(
    space: SpaceSpec,
    n: IndexLike,
    phi0: ComplexVector,
    phi1: ComplexVector,
    a: complex = 1.0,
) -> tuple[tuple[WeightSymbol, ...], tuple[LftSymbol, ...]]:
    """
    Symbols making D_{n, psi, phi} complex symmetric with respect to J.

    psi(z) = a prod_j z_j^{n_j} (1 - phi_j(0) z_j)^(-gamma - n_j) and
    phi_j(z) = phi_j(0) + phi_j'(0) z / (1 - phi_j(0) z).

    Args:
        space: Ambient space
        n: Derivative orders
        phi0: phi_j(0) per factor (a single value is repeated)
        phi1: phi_j'(0) per factor
        a: Amplitude of psi, carried by the first factor

    Returns:
        (weights, lfts), one of each per disk factor
    """
    orders = as_orders(space, n)
    phi0 = _vector(phi0, space.d, "phi0")
    phi1 = _vector(phi1, space.d, "phi1")
    weights, lfts = [], []
    for j in range(space.d):
        lfts.append(_checked_lft(phi0[j], phi1[j], phi0[j]))
        amplitude = a if j == 0 else 1.0
        weights.append(WeightSymbol(amplitude, orders[j], phi0[j], space.gamma + orders[j]))
    return tuple(weights), tuple(lfts)


def canonical_sa_symbols(
    space: SpaceSpec,
    n: IndexLike,
    phi0: ComplexVector,
    phi1: Union[float, Sequence[float]],
    a: float = 1.0,
) -> tuple[tuple[WeightSymbol, ...], tuple[LftSymbol, ...]]:
    """
    Symbols making D_{n, psi, phi} self-adjoint.

    psi(z) = a prod_j z_j^{n_j} (1 - conj(phi_j(0)) z_j)^(-gamma - n_j) and
    phi_j(z) = phi_j(0) + conj(phi_j'(0)) z / (1 - conj(phi_j(0)) z), with a and
    phi_j'(0) real.
    """
    orders = as_orders(space, n)
    phi0 = _vector(phi0, space.d, "phi0")
    slopes = [_real(v, "phi1") for v in _vector(phi1, space.d, "phi1")]
    a = _real(a, "a")
    weights, lfts = [], []
    for j in range(space.d):
        pole = np.conj(phi0[j])
        lfts.append(_checked_lft(phi0[j], slopes[j], pole))
        amplitude = a if j == 0 else 1.0
        weights.append(WeightSymbol(amplitude, orders[j], pole, space.gamma + orders[j]))
    return tuple(weights), tuple(lfts)


def canonical_cs_symbols_rotation(
    gamma: int,
    xi: complex,
    phi0: complex,
    phi1: complex,
    c: Sequence[complex],
) -> tuple[tuple[WeightSymbol, ...], LftSymbol]:
    """
    Symbols making M = sum_j D_{j, psi_j, phi} complex symmetric with respect to C_{mu, xi}.

    psi_j(z) = c_j z^j (1 - xi phi(0) z)^(-gamma - j) for j = 1..len(c), and
    phi(z) = phi(0) + phi'(0) z / (1 - xi phi(0) z).
    """
    SpaceSpec(1, gamma)
    xi = complex(xi)
    if abs(abs(xi) - 1) > UNIMODULAR_TOLERANCE:
        raise ValueError(f"xi must be unimodular, got |xi| = {abs(xi):.17g}")
    if len(c) == 0:
        raise ValueError("c needs at least one coefficient")
    pole = xi * complex(phi0)
    phi = _checked_lft(phi0, phi1, pole)
    weights = tuple(
        WeightSymbol(cj, j, pole, gamma + j) for j, cj in enumerate(c, start=1)
    )
    return weights, phi


def canonical_hermitian_symbols(
    gamma: int,
    phi0: complex,
    phi1: float,
    c: Sequence[float],
) -> tuple[tuple[WeightSymbol, ...], LftSymbol]:
    """
    Symbols making M = sum_j D_{j, psi_j, phi} Hermitian.

    psi_j(z) = c_j z^j (1 - conj(phi(0)) z)^(-gamma - j) and
    phi(z) = phi(0) + conj(phi'(0)) z / (1 - conj(phi(0)) z), with c_j and phi'(0) real.
    """
    SpaceSpec(1, gamma)
    slope = _real(phi1, "phi1")
    coefficients = [_real(cj, "c") for cj in c]
    if not coefficients:
        raise ValueError("c needs at least one coefficient")
    pole = np.conj(complex(phi0))
    phi = _checked_lft(phi0, slope, pole)
    weights = tuple(
        WeightSymbol(cj, j, pole, gamma + j) for j, cj in enumerate(coefficients, start=1)
    )
    return weights, phi


def compdiff_operator(
    space: SpaceSpec, n: IndexLike, symbols: tuple
) -> CompositionDifferentiationOperator:
    """D_{n, psi, phi} from a (weights, lfts) pair."""
    weights, lfts = symbols
    return CompositionDifferentiationOperator(space, n, weights, lfts)


def sum_operator(gamma: int, symbols: tuple) -> GeneralizedSumOperator:
    """M = sum_j D_{j, psi_j, phi} from a (weights, lft) pair; psi_j carries c_j."""
    weights, phi = symbols
    summands = tuple(SumTerm(1.0, j, psi) for j, psi in enumerate(weights, start=1))
    return GeneralizedSumOperator(SpaceSpec(1, gamma), summands, phi)
