"""Truncated power series (jets) and the closed-form symbols expanded with them."""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Protocol, Union, runtime_checkable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import toeplitz

from .errors import DomainError
from .kernels import DiskPoint, ipow, kernel_binomials

logger = logging.getLogger(__name__)

# Radius of the ring sampled by self_map_margin.
SELF_MAP_RING = 0.999


@runtime_checkable
class Symbol(Protocol):
    """Anything usable as psi or phi: a vectorized callable with a Taylor expansion."""

    def __call__(self, z): ...

    def to_series(self, degree: int) -> "TruncatedSeries": ...


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Taylor coefficients a_0..a_N of an analytic function about 0."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("a truncated series needs a non-empty coefficient vector")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("series coefficients must be finite")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zeros(cls, degree: int) -> "TruncatedSeries":
        return cls(np.zeros(degree + 1, dtype=complex))

    @classmethod
    def monomial(cls, k: int, degree: int, scale: complex = 1.0) -> "TruncatedSeries":
        coeffs = np.zeros(degree + 1, dtype=complex)
        if k <= degree:
            coeffs[k] = scale
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return P.polyval(z, self.coeffs)

    def __len__(self) -> int:
        return self.coeffs.size

    def to_series(self, degree: int) -> "TruncatedSeries":
        """Pad with zeros or truncate to ``degree``."""
        coeffs = np.zeros(degree + 1, dtype=complex)
        keep = min(degree, self.degree) + 1
        coeffs[:keep] = self.coeffs[:keep]
        return TruncatedSeries(coeffs)

    def _check_degree(self, other: "TruncatedSeries") -> None:
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_degree(other)
        return TruncatedSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_degree(other)
        return TruncatedSeries(self.coeffs - other.coeffs)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.coeffs)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return TruncatedSeries(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"TruncatedSeries(degree={self.degree}, coeffs={np.array2string(self.coeffs, precision=4)})"


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common degree."""
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    return TruncatedSeries(np.convolve(f.coeffs, g.coeffs)[: f.degree + 1])


def series_derivative(f: TruncatedSeries) -> TruncatedSeries:
    """d/dz, zero-padded back to the original degree."""
    if f.degree < 1:
        raise ValueError("series_derivative needs degree >= 1")
    coeffs = np.zeros(f.degree + 1, dtype=complex)
    coeffs[:-1] = P.polyder(f.coeffs)
    return TruncatedSeries(coeffs)


def series_compose(f: TruncatedSeries, phi: TruncatedSeries) -> TruncatedSeries:
    """
    Taylor coefficients of f(phi(z)) through the common degree, by Horner's rule in
    the jet algebra.

    Args:
        f: Outer function
        phi: Inner function; phi(0) must lie in the open disk

    Returns:
        The composed series, exact through the degree when f is a polynomial
    """
    if f.degree != phi.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {phi.degree}")
    if abs(phi.coeffs[0]) >= 1:
        raise DomainError(f"|phi(0)| = {abs(phi.coeffs[0]):.6g} must be < 1")
    degree = f.degree
    result = np.zeros(degree + 1, dtype=complex)
    result[0] = f.coeffs[-1]
    for a in f.coeffs[-2::-1]:
        result = np.convolve(result, phi.coeffs)[: degree + 1]
        result[0] += a
    return TruncatedSeries(result)


def series_powers(phi: TruncatedSeries, count: int) -> np.ndarray:
    """Matrix whose column j holds the coefficients of phi^j, j < count."""
    size = phi.degree + 1
    multiply = toeplitz(phi.coeffs, np.zeros(size, dtype=complex))
    powers = np.zeros((size, count), dtype=complex)
    column = np.zeros(size, dtype=complex)
    column[0] = 1.0
    for j in range(count):
        powers[:, j] = column
        column = multiply @ column
    return powers


def binomial_negative_power(c: complex, s: int, degree: int) -> TruncatedSeries:
    """Coefficients binom(k + s - 1, k) c^k of (1 - cz)^(-s) through ``degree``."""
    c = complex(c)
    if abs(c) >= 1:
        raise DomainError(f"|c| = {abs(c):.6g} must be < 1")
    if s < 1:
        raise ValueError(f"exponent s must be a positive integer, got {s!r}")
    powers = np.ones(degree + 1, dtype=complex)
    if degree:
        powers[1:] = np.cumprod(np.full(degree, c, dtype=complex))
    return TruncatedSeries(kernel_binomials(s, degree + 1) * powers)


@dataclass(frozen=True)
class LftSymbol:
    """phi(z) = b0 + b1 z / (1 - c z), a linear-fractional map with pole 1/c off the closed disk."""

    b0: complex = 0j
    b1: complex = 1 + 0j
    c: complex = 0j

    def __post_init__(self):
        for name in ("b0", "b1", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if abs(self.c) >= 1:
            raise DomainError(f"pole parameter |c| = {abs(self.c):.6g} must be < 1")

    @classmethod
    def identity(cls) -> "LftSymbol":
        return cls(0, 1, 0)

    @classmethod
    def linear(cls, beta: complex) -> "LftSymbol":
        return cls(0, beta, 0)

    @classmethod
    def blaschke(cls, alpha: complex) -> "LftSymbol":
        """(z - alpha) / (1 - conj(alpha) z) = -alpha + (1 - |alpha|^2) z / (1 - conj(alpha) z)."""
        alpha = DiskPoint(alpha).value
        return cls(-alpha, 1 - abs(alpha) ** 2, np.conj(alpha))

    @property
    def is_identity(self) -> bool:
        return self.b0 == 0 and self.b1 == 1 and self.c == 0

    def __call__(self, z):
        return self.b0 + self.b1 * z / (1 - self.c * z)

    def to_series(self, degree: int) -> TruncatedSeries:
        return lft_to_series(self, degree)


def lft_to_series(phi: LftSymbol, degree: int) -> TruncatedSeries:
    """[b0, b1, b1 c, b1 c^2, ...] through ``degree``."""
    coeffs = np.zeros(degree + 1, dtype=complex)
    coeffs[0] = phi.b0
    if degree:
        coeffs[1] = phi.b1
        coeffs[2:] = phi.b1 * np.cumprod(np.full(degree - 1, phi.c, dtype=complex))
    return TruncatedSeries(coeffs)


@dataclass(frozen=True)
class WeightSymbol:
    """psi(z) = a z^n (1 - c z)^(-s)."""

    a: complex
    n: int = 0
    c: complex = 0j
    s: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "c", complex(self.c))
        if self.a == 0:
            raise ValueError("weight symbol must not be identically zero (a = 0)")
        if self.n < 0:
            raise ValueError(f"monomial order n must be >= 0, got {self.n}")
        if self.s < 1:
            raise ValueError(f"exponent s must be >= 1, got {self.s}")
        if abs(self.c) >= 1:
            raise DomainError(f"pole parameter |c| = {abs(self.c):.6g} must be < 1")

    @classmethod
    def constant(cls, a: complex = 1.0) -> "WeightSymbol":
        return cls(a, 0, 0, 1)

    def __call__(self, z):
        return self.a * ipow(z, self.n) * ipow(1 - self.c * z, -self.s)

    def to_series(self, degree: int) -> TruncatedSeries:
        coeffs = np.zeros(degree + 1, dtype=complex)
        if self.n <= degree:
            base = binomial_negative_power(self.c, self.s, degree - self.n).coeffs
            coeffs[self.n :] = self.a * base
        return TruncatedSeries(coeffs)


@dataclass(frozen=True)
class ProductSymbol:
    """Pointwise product of symbols."""

    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a product symbol needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    def __call__(self, z):
        return reduce(lambda acc, f: acc * f(z), self.factors[1:], self.factors[0](z))

    def to_series(self, degree: int) -> TruncatedSeries:
        return reduce(series_mul, (f.to_series(degree) for f in self.factors))


SymbolLike = Union[LftSymbol, WeightSymbol, ProductSymbol, TruncatedSeries]


def self_map_margin(phi, samples: int = 256) -> float:
    """
    Sampled self-map check: min over z = 0.999 e^(i theta) of 1 - |phi(z)|.

    A positive margin is necessary for phi to map the disk into itself; it is not a proof.
    """
    if samples < 64:
        raise ValueError(f"self_map_margin needs at least 64 samples, got {samples}")
    theta = 2 * np.pi * np.arange(samples) / samples
    z = SELF_MAP_RING * np.exp(1j * theta)
    values = np.asarray(phi(z), dtype=complex)
    margin = float(1 - np.max(np.abs(values)))
    logger.debug("self_map_margin(%r) = %.6g", phi, margin)
    return margin
