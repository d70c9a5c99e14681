"""Reproducing kernels of H_gamma over the disk and the polydisk."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from scipy.special import comb, gammaln, poch

from .errors import DomainError

logger = logging.getLogger(__name__)

# Points may approach the circle this closely (boundary-limit probes).
BOUNDARY_TOLERANCE = 1e-9
# Binomials up to this degree are exact integers; beyond it they go through gammaln.
EXACT_BINOMIAL_DEGREE = 512


def _is_integer(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


@dataclass(frozen=True)
class SpaceSpec:
    """The space H_gamma(D^d): ``d`` disk factors, integer kernel exponent ``gamma``."""

    d: int = 1
    gamma: int = 1

    def __post_init__(self):
        if not _is_integer(self.d) or self.d < 1:
            raise ValueError(f"dimension d must be a positive integer, got {self.d!r}")
        if not _is_integer(self.gamma) or self.gamma < 1:
            raise ValueError(f"gamma must be a positive integer, got {self.gamma!r}")


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk."""

    value: complex

    def __post_init__(self):
        value = complex(self.value)
        if not np.isfinite(value):
            raise DomainError(f"point {value} is not finite")
        if abs(value) > 1 - BOUNDARY_TOLERANCE:
            raise DomainError(
                f"point {value} is not inside the unit disk (|w| = {abs(value):.12g})"
            )
        object.__setattr__(self, "value", value)

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class PolyPoint:
    """A point of the polydisk D^d."""

    coords: tuple[complex, ...]

    def __post_init__(self):
        coords = tuple(DiskPoint(c).value for c in self.coords)
        if not coords:
            raise ValueError("a polydisk point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *values) -> "PolyPoint":
        return cls(tuple(values))

    @property
    def d(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class MultiIndex:
    """Derivative orders n_1..n_d."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(self.orders)
        if not orders:
            raise ValueError("a multi-index needs at least one entry")
        for n in orders:
            if not _is_integer(n) or n < 0:
                raise ValueError(f"multi-index entries must be non-negative integers, got {n!r}")
        object.__setattr__(self, "orders", tuple(int(n) for n in orders))

    @classmethod
    def of(cls, *orders: int) -> "MultiIndex":
        return cls(tuple(orders))

    @classmethod
    def zeros(cls, d: int) -> "MultiIndex":
        return cls((0,) * d)


PointLike = Union[PolyPoint, DiskPoint, complex, float, Sequence[complex]]
IndexLike = Union[MultiIndex, int, Sequence[int]]


def as_coordinates(space: SpaceSpec, point: PointLike) -> np.ndarray:
    """Validate ``point`` against ``space`` and return its coordinates as an array."""
    if isinstance(point, PolyPoint):
        coords = point.coords
    elif isinstance(point, (DiskPoint, complex, float, int, np.number)):
        coords = PolyPoint((point,)).coords
    else:
        coords = PolyPoint(tuple(point)).coords
    if len(coords) != space.d:
        raise ValueError(f"expected a point with {space.d} coordinates, got {len(coords)}")
    return np.array(coords, dtype=complex)


def as_orders(space: SpaceSpec, n: IndexLike) -> tuple[int, ...]:
    """Validate a multi-index against ``space``."""
    if isinstance(n, MultiIndex):
        orders = n.orders
    elif _is_integer(n):
        orders = MultiIndex((n,)).orders
    else:
        orders = MultiIndex(tuple(n)).orders
    if len(orders) != space.d:
        raise ValueError(f"expected a multi-index of length {space.d}, got {len(orders)}")
    return orders


def ipow(base, exponent: int):
    """Integer power by repeated squaring; complex scalars or numpy arrays."""
    if exponent < 0:
        return 1.0 / ipow(base, -exponent)
    if isinstance(base, np.ndarray):
        result = np.ones(base.shape, dtype=complex)
    else:
        result = complex(1.0)
    factor = base
    while exponent:
        if exponent & 1:
            result = result * factor
        exponent >>= 1
        if exponent:
            factor = factor * factor
    return result


def _kernel_product(gamma: int, orders, w: np.ndarray, z: np.ndarray) -> complex:
    value = complex(1.0)
    for n, wj, zj in zip(orders, w, z):
        factor = ipow(1 - np.conj(wj) * zj, -gamma - n)
        if n:
            factor = poch(gamma, n) * ipow(zj, n) * factor
        value *= factor
    return complex(value)


def kernel_eval(space: SpaceSpec, w: PointLike, z: PointLike) -> complex:
    """K_w(z) = prod_j (1 - conj(w_j) z_j)^(-gamma)."""
    wc = as_coordinates(space, w)
    zc = as_coordinates(space, z)
    return _kernel_product(space.gamma, (0,) * space.d, wc, zc)


def kernel_norm(space: SpaceSpec, w: PointLike) -> float:
    """||K_w|| = prod_j (1 - |w_j|^2)^(-gamma/2)."""
    return float(np.sqrt(kernel_eval(space, w, w).real))


def normalized_kernel_eval(space: SpaceSpec, w: PointLike, z: PointLike) -> complex:
    """The normalized kernel k_w(z) = K_w(z) / ||K_w||."""
    return kernel_eval(space, w, z) / kernel_norm(space, w)


def derivative_kernel_eval(
    space: SpaceSpec, n: IndexLike, w: PointLike, z: PointLike
) -> complex:
    """
    Kernel reproducing the ``n``-th partial derivative at ``w``.

    K_w^[n](z) = prod_j (gamma)_{n_j} z_j^{n_j} (1 - conj(w_j) z_j)^(-gamma - n_j),
    with (gamma)_m the rising factorial.

    Args:
        space: Ambient space
        n: Derivative orders, one per disk factor
        w: Evaluation point of the derivative
        z: Argument of the kernel function

    Returns:
        The kernel value; for n = 0 it is exactly kernel_eval(space, w, z)
    """
    orders = as_orders(space, n)
    wc = as_coordinates(space, w)
    zc = as_coordinates(space, z)
    return _kernel_product(space.gamma, orders, wc, zc)


def _binomial(k: int, gamma: int) -> int:
    return int(comb(k + gamma - 1, k, exact=True))


def _log_binomial(k, gamma: int):
    return gammaln(k + gamma) - gammaln(k + 1) - gammaln(gamma)


def basis_norm_sq(space: SpaceSpec, k: IndexLike) -> Fraction:
    """||z^k||^2 = prod_j 1 / binom(k_j + gamma - 1, k_j)."""
    orders = as_orders(space, k)
    if max(orders) <= EXACT_BINOMIAL_DEGREE:
        denominator = 1
        for kj in orders:
            denominator *= _binomial(kj, space.gamma)
        return Fraction(1, denominator)
    log_value = -sum(float(_log_binomial(kj, space.gamma)) for kj in orders)
    return Fraction(float(np.exp(log_value)))


def kernel_binomials(gamma: int, count: int) -> np.ndarray:
    """binom(k + gamma - 1, k) for k < count, as floats."""
    k = np.arange(count)
    values = np.empty(count, dtype=float)
    exact = k <= EXACT_BINOMIAL_DEGREE
    values[exact] = [float(_binomial(int(kk), gamma)) for kk in k[exact]]
    if not exact.all():
        values[~exact] = np.exp(_log_binomial(k[~exact].astype(float), gamma))
    return values


def basis_norms(gamma: int, count: int) -> np.ndarray:
    """sqrt(||z^k||^2) for k < count; e_k = z^k / basis_norms[k] is orthonormal."""
    return 1.0 / np.sqrt(kernel_binomials(gamma, count))


def _geometric(c: complex, count: int) -> np.ndarray:
    powers = np.ones(count, dtype=complex)
    if count > 1:
        powers[1:] = np.cumprod(np.full(count - 1, c, dtype=complex))
    return powers


def kernel_coefficients(gamma: int, w: complex, degree: int) -> np.ndarray:
    """Taylor coefficients of K_w about 0 through ``degree`` (one variable)."""
    w = DiskPoint(w).value
    return kernel_binomials(gamma, degree + 1) * _geometric(np.conj(w), degree + 1)


def derivative_kernel_coefficients(gamma: int, n: int, w: complex, degree: int) -> np.ndarray:
    """Taylor coefficients of K_w^[n] about 0 through ``degree`` (one variable)."""
    w = DiskPoint(w).value
    coeffs = np.zeros(degree + 1, dtype=complex)
    if n > degree:
        return coeffs
    base = kernel_binomials(gamma + n, degree + 1 - n) * _geometric(np.conj(w), degree + 1 - n)
    coeffs[n:] = poch(gamma, n) * base
    return coeffs


def _coefficient_array(coeffs) -> np.ndarray:
    return np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=complex)


def reproduce_eval(space: SpaceSpec, coeffs, w: PointLike) -> complex:
    """
    Evaluate f at ``w`` as the inner product <f, K_w> in orthonormal coordinates.

    Args:
        space: Ambient space
        coeffs: Taylor coefficients of f; a TruncatedSeries (or vector) when d = 1,
            a rank-d coefficient tensor when d > 1
        w: Evaluation point

    Returns:
        f(w)
    """
    a = _coefficient_array(coeffs)
    wc = as_coordinates(space, w)
    if a.ndim != space.d:
        raise ValueError(f"expected a rank-{space.d} coefficient array, got rank {a.ndim}")
    value = a
    for wj in wc:
        size = value.shape[0]
        norms = basis_norms(space.gamma, size)
        kernel_on = kernel_coefficients(space.gamma, wj, size - 1) * norms
        # contract the leading axis: sum_k a_k conj(b_k) ||z^k||^2
        value = np.tensordot(np.conj(kernel_on) * norms, value, axes=([0], [0]))
    return complex(value)


def reproduce_derivative(space: SpaceSpec, coeffs, n: int, w: PointLike) -> complex:
    """<f, K_w^[n]> in orthonormal coordinates; equals the n-th derivative f^(n)(w)."""
    if space.d != 1:
        raise ValueError("reproduce_derivative is implemented for d = 1")
    a = _coefficient_array(coeffs)
    wc = as_coordinates(space, w)
    norms = basis_norms(space.gamma, a.size)
    kernel_on = derivative_kernel_coefficients(space.gamma, n, wc[0], a.size - 1) * norms
    return complex(np.vdot(kernel_on, a * norms))
