"""Composition-type operators on H_gamma and their closed-form action on kernels."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from scipy.linalg import toeplitz
from scipy.special import poch

from .conjugations import ConjugationSpec
from .errors import DomainError, SelfMapError
from .jets import TruncatedSeries, WeightSymbol, self_map_margin, series_powers
from .kernels import MultiIndex, PointLike, SpaceSpec, as_coordinates, as_orders, basis_norms, ipow

logger = logging.getLogger(__name__)

# Largest finite section operator_matrix will build.
MAX_MATRIX_SIZE = 1024


@dataclass(frozen=True)
class OperatorTerm:
    """One summand f -> a * psi(z) * (d^n f)(phi(z)), with psi and phi given per factor."""

    a: complex
    orders: tuple[int, ...]
    psi: tuple
    phi: tuple


def _as_factors(value: Any, d: int, name: str) -> tuple:
    factors = tuple(value) if isinstance(value, (tuple, list)) else (value,)
    if len(factors) != d:
        raise ValueError(f"expected {d} factor(s) for {name}, got {len(factors)}")
    return factors


def _check_weight(psi) -> None:
    if not np.any(psi.to_series(16).coeffs):
        raise ValueError("weight symbol psi must not be identically zero")


def _check_self_map(phi) -> float:
    margin = self_map_margin(phi)
    if margin <= 0:
        raise SelfMapError(margin)
    return margin


class OperatorSpec(ABC):
    """Abstract base class for operators acting on H_gamma(D^d)."""

    space: SpaceSpec

    @abstractmethod
    def terms(self) -> tuple[OperatorTerm, ...]:
        """The operator as a sum of weighted composition-differentiation terms."""
        pass

    def _validate(self, psi: tuple, phi: tuple) -> None:
        for factor in psi:
            _check_weight(factor)
        for factor in phi:
            _check_self_map(factor)


@dataclass(frozen=True)
class CompositionOperator(OperatorSpec):
    """C_phi f = f o phi."""

    space: SpaceSpec
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "phi", _as_factors(self.phi, self.space.d, "phi"))
        self._validate((), self.phi)

    def terms(self) -> tuple[OperatorTerm, ...]:
        one = (WeightSymbol.constant(1.0),) * self.space.d
        return (OperatorTerm(1 + 0j, (0,) * self.space.d, one, self.phi),)


@dataclass(frozen=True)
class WeightedCompositionOperator(OperatorSpec):
    """W f = psi * (f o phi)."""

    space: SpaceSpec
    psi: tuple
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "psi", _as_factors(self.psi, self.space.d, "psi"))
        object.__setattr__(self, "phi", _as_factors(self.phi, self.space.d, "phi"))
        self._validate(self.psi, self.phi)

    def terms(self) -> tuple[OperatorTerm, ...]:
        return (OperatorTerm(1 + 0j, (0,) * self.space.d, self.psi, self.phi),)


@dataclass(frozen=True)
class CompositionDifferentiationOperator(OperatorSpec):
    """D f = psi * (d^n f) o phi."""

    space: SpaceSpec
    n: MultiIndex
    psi: tuple
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "n", MultiIndex(as_orders(self.space, self.n)))
        object.__setattr__(self, "psi", _as_factors(self.psi, self.space.d, "psi"))
        object.__setattr__(self, "phi", _as_factors(self.phi, self.space.d, "phi"))
        self._validate(self.psi, self.phi)

    def terms(self) -> tuple[OperatorTerm, ...]:
        return (OperatorTerm(1 + 0j, self.n.orders, self.psi, self.phi),)


@dataclass(frozen=True)
class SumTerm:
    """a_j D_{j, psi_j, phi} inside a generalized sum."""

    a: complex
    order: int
    psi: Any

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if not isinstance(self.order, (int, np.integer)) or self.order < 1:
            raise ValueError(f"sum term order must be a positive integer, got {self.order!r}")


@dataclass(frozen=True)
class GeneralizedSumOperator(OperatorSpec):
    """M = sum_j a_j D_{j, psi_j, phi} on H_gamma(D), sharing one phi."""

    space: SpaceSpec
    summands: tuple
    phi: Any

    def __post_init__(self):
        if self.space.d != 1:
            raise ValueError(f"generalized sums are defined for d = 1, got d = {self.space.d}")
        summands = tuple(self.summands)
        if not summands:
            raise ValueError("a generalized sum needs at least one term")
        object.__setattr__(self, "summands", summands)
        self._validate(tuple(t.psi for t in summands), (self.phi,))

    def terms(self) -> tuple[OperatorTerm, ...]:
        return tuple(
            OperatorTerm(t.a, (int(t.order),), (t.psi,), (self.phi,)) for t in self.summands
        )


def create_operator(kind: str, space: SpaceSpec, **params) -> OperatorSpec:
    """Factory function to create an operator by variant name."""
    kind = kind.lower()

    if kind == "composition":
        return CompositionOperator(space, params["phi"])
    elif kind == "weighted":
        return WeightedCompositionOperator(space, params["psi"], params["phi"])
    elif kind == "compdiff":
        return CompositionDifferentiationOperator(space, params["n"], params["psi"], params["phi"])
    elif kind == "sum":
        return GeneralizedSumOperator(space, params["summands"], params["phi"])
    else:
        raise ValueError(f"Unknown operator variant: {kind}")


def _evaluate(symbol, values: np.ndarray) -> np.ndarray:
    return np.asarray(symbol(values), dtype=complex)


def kernel_action(op: OperatorSpec, wbar: np.ndarray, z: np.ndarray) -> np.ndarray:
    """
    (T K_w)(z) for arrays of points, with ``wbar`` = conj(w).

    Args:
        op: The operator
        wbar: Conjugated kernel points, shape (d, m) or broadcastable to it
        z: Arguments, shape (d, m)

    Returns:
        Values of shape (m,)
    """
    gamma = op.space.gamma
    total = np.zeros(np.broadcast(wbar, z).shape[1:], dtype=complex)
    for term in op.terms():
        value = np.full(total.shape, term.a, dtype=complex)
        for j, n in enumerate(term.orders):
            phi_z = _evaluate(term.phi[j], z[j])
            factor = _evaluate(term.psi[j], z[j]) * ipow(1 - wbar[j] * phi_z, -gamma - n)
            if n:
                factor = factor * poch(gamma, n) * ipow(wbar[j], n)
            value = value * factor
        total = total + value
    return total


def adjoint_kernel_action(op: OperatorSpec, w: np.ndarray, z: np.ndarray) -> np.ndarray:
    """(T* K_w)(z) = sum conj(a psi(w)) K^[n]_{phi(w)}(z) for arrays of points."""
    gamma = op.space.gamma
    total = np.zeros(np.broadcast(w, z).shape[1:], dtype=complex)
    for term in op.terms():
        value = np.full(total.shape, np.conj(term.a), dtype=complex)
        for j, n in enumerate(term.orders):
            phi_w = _evaluate(term.phi[j], w[j])
            if np.any(np.abs(phi_w) >= 1):
                raise DomainError(f"phi(w) leaves the disk (|phi(w)| = {np.max(np.abs(phi_w)):.6g})")
            factor = np.conj(_evaluate(term.psi[j], w[j])) * ipow(1 - np.conj(phi_w) * z[j], -gamma - n)
            if n:
                factor = factor * poch(gamma, n) * ipow(z[j], n)
            value = value * factor
        total = total + value
    return total


def symmetry_sides(
    op: OperatorSpec, conj: ConjugationSpec, w: np.ndarray, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of T C K_w = C T* K_w evaluated at z, for arrays of points."""
    mu, xi = conj.kernel_parameters(op.space.d)
    lhs = mu * kernel_action(op, xi * w, z)
    rhs = mu * np.conj(adjoint_kernel_action(op, w, np.conj(xi * z)))
    return lhs, rhs


@dataclass(frozen=True)
class KernelEvaluator:
    """A closed-form function of z bound to one kernel point."""

    space: SpaceSpec
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, z: PointLike) -> complex:
        zc = as_coordinates(self.space, z)
        return complex(self.evaluate_many(zc[:, None])[0])

    def evaluate_many(self, z: np.ndarray) -> np.ndarray:
        """Evaluate at the columns of a (d, m) array."""
        return self.func(np.asarray(z, dtype=complex))


def adjoint_on_kernel(op: OperatorSpec, w: PointLike) -> KernelEvaluator:
    """
    Closed-form evaluator of T* K_w.

    Raises DomainError when phi(w) is not in the open polydisk.
    """
    wc = as_coordinates(op.space, w)[:, None]
    # fail early on phi(w) outside the disk
    adjoint_kernel_action(op, wc, wc)
    return KernelEvaluator(op.space, lambda z: adjoint_kernel_action(op, wc, z))


def apply_on_kernel(
    op: OperatorSpec, conj: ConjugationSpec, w: PointLike
) -> tuple[KernelEvaluator, KernelEvaluator]:
    """Evaluators of T C K_w (lhs) and C T* K_w (rhs)."""
    wc = as_coordinates(op.space, w)[:, None]
    conj.kernel_parameters(op.space.d)
    lhs = KernelEvaluator(op.space, lambda z: symmetry_sides(op, conj, wc, z)[0])
    rhs = KernelEvaluator(op.space, lambda z: symmetry_sides(op, conj, wc, z)[1])
    return lhs, rhs


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """An N x N finite section in the orthonormal monomial basis of H_gamma(D)."""

    entries: np.ndarray
    space: SpaceSpec

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise ValueError(f"operator matrix must be square and non-empty, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ValueError("operator matrix entries must be finite")
        if self.space.d != 1:
            raise ValueError("operator matrices are one-variable (d = 1)")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_array(cls, entries, gamma: int = 1) -> "OperatorMatrix":
        return cls(np.asarray(entries), SpaceSpec(1, gamma))

    @classmethod
    def identity(cls, size: int, gamma: int = 1) -> "OperatorMatrix":
        return cls(np.eye(size), SpaceSpec(1, gamma))

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.space)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if other.space != self.space or other.size != self.size:
            raise ValueError("operator matrices must share space and size")
        return OperatorMatrix(self.entries + other.entries, self.space)

    def apply_to_series(self, f: TruncatedSeries) -> TruncatedSeries:
        """Apply the finite section to Taylor coefficients (degree < size)."""
        norms = basis_norms(self.space.gamma, self.size)
        coeffs = f.to_series(self.size - 1).coeffs
        return TruncatedSeries((self.entries @ (coeffs * norms)) / norms)


def operator_matrix(op: OperatorSpec, N: int) -> OperatorMatrix:
    """
    Finite section of ``op`` on span{e_0, ..., e_{N-1}}.

    Column k holds the orthonormal coefficients of op(e_k): differentiate e_k n times,
    compose with phi, multiply by psi, rescale by the basis norms. Composing monomials with
    phi reduces to the powers phi^j, built column by column from one Toeplitz product each;
    this is series_compose applied to every z^j at once.

    Args:
        op: A one-variable operator
        N: Number of basis vectors

    Returns:
        The N x N OperatorMatrix
    """
    if op.space.d != 1:
        raise ValueError("operator_matrix needs a one-variable operator (d = 1)")
    if not isinstance(N, (int, np.integer)) or not 1 <= N <= MAX_MATRIX_SIZE:
        raise ValueError(f"N must be an integer in [1, {MAX_MATRIX_SIZE}], got {N!r}")
    degree = N - 1
    k = np.arange(N)
    raw = np.zeros((N, N), dtype=complex)
    for term in op.terms():
        n = term.orders[0]
        if n >= N:
            continue
        psi = term.psi[0].to_series(degree).coeffs
        phi = term.phi[0].to_series(degree)
        # column j: psi * phi^j
        weighted = toeplitz(psi, np.zeros(N, dtype=complex)) @ series_powers(phi, N - n)
        raw[:, n:] += term.a * weighted * poch(k[n:] - n + 1, n)
    norms = basis_norms(op.space.gamma, N)
    logger.debug("operator_matrix: N=%d, %d term(s)", N, len(op.terms()))
    return OperatorMatrix(raw * norms[:, None] / norms[None, :], op.space)
