"""Numerical ranges: Hardy-space Berezin points of weighted composition sums and hulls of finite sections."""

import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.linalg import LinAlgError, eigh

from .berezin import RangeCloud
from .errors import DomainError, NumericalError
from .kernels import DiskPoint
from .operators import OperatorMatrix

logger = logging.getLogger(__name__)

# Two hull vertices closer than this are the same corner.
VERTEX_TOLERANCE = 1e-12

SymbolPairs = Sequence[tuple]
MatrixLike = Union[OperatorMatrix, np.ndarray]


def _lambda_values(symbols: SymbolPairs, z: np.ndarray) -> np.ndarray:
    total = np.zeros(z.shape, dtype=complex)
    s = 1 - np.abs(z) ** 2
    for psi, phi in symbols:
        phi_z = np.asarray(phi(z), dtype=complex)
        if np.any(np.abs(phi_z) >= 1):
            raise DomainError(f"phi(z) leaves the disk (|phi(z)| = {np.max(np.abs(phi_z)):.6g})")
        total = total + np.asarray(psi(z), dtype=complex) * s / (1 - np.conj(z) * phi_z)
    return total


def numrange_point(symbols: SymbolPairs, z) -> complex:
    """
    lambda_z = sum_j psi_j(z) (1 - |z|^2) / (1 - conj(z) phi_j(z)) on the Hardy space.

    This is the Berezin value of sum_j psi_j C_{phi_j} at z, hence a point of its
    numerical range. The weights enter unconjugated: the variant with conj(psi_j(z))
    is not a Berezin value of the sum (nor of its adjoint) once a weight is non-real,
    and then falls outside the numerical range in general.

    Args:
        symbols: (psi_j, phi_j) pairs
        z: Point of the disk

    Returns:
        lambda_z
    """
    if not symbols:
        raise ValueError("numrange_point needs at least one (psi, phi) pair")
    z = DiskPoint(z).value
    return complex(_lambda_values(symbols, np.array([z]))[0])


def _is_identity(phi) -> bool:
    probe = np.array([0.1, 0.3j, -0.5 + 0.2j, 0.7])
    return bool(np.allclose(np.asarray(phi(probe), dtype=complex), probe, rtol=0, atol=1e-14))


def boundary_decay_probe(symbols: SymbolPairs, xi: complex, r_sequence: Sequence[float]) -> list[float]:
    """|lambda_{r xi}| along a radius; tends to 0 when no phi_j is the identity."""
    xi = complex(xi)
    if abs(abs(xi) - 1) > 1e-14:
        raise ValueError(f"xi must be unimodular, got |xi| = {abs(xi):.17g}")
    for _, phi in symbols:
        if _is_identity(phi):
            raise ValueError("boundary decay needs composition symbols that are not the identity")
    points = np.array([DiskPoint(r * xi).value for r in r_sequence])
    magnitudes = np.abs(_lambda_values(symbols, points))
    logger.debug("boundary decay along xi=%s: %s", xi, magnitudes)
    return [float(m) for m in magnitudes]


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """
    Outer approximation of a numerical range by its supporting half-planes.

    Vertex k maximizes Re(conj(normals[k]) z) over the range, with maximum support[k];
    vertices run counterclockwise.
    """

    vertices: np.ndarray
    normals: np.ndarray
    support: np.ndarray

    def signed_distance(self, points) -> np.ndarray:
        """max_k Re(conj(n_k) p) - h_k; negative inside, positive outside."""
        points = np.atleast_1d(np.asarray(points, dtype=complex))
        projections = (np.conj(self.normals)[:, None] * points[None, :]).real
        return np.max(projections - self.support[:, None], axis=0)

    def corners(self) -> np.ndarray:
        """Vertices with consecutive repeats removed (cyclically)."""
        keep = [self.vertices[0]]
        for v in self.vertices[1:]:
            if abs(v - keep[-1]) > VERTEX_TOLERANCE:
                keep.append(v)
        while len(keep) > 1 and abs(keep[-1] - keep[0]) <= VERTEX_TOLERANCE:
            keep.pop()
        return np.array(keep)

    def is_convex(self, tol: float = 1e-9) -> bool:
        corners = self.corners()
        if corners.size < 3:
            return True
        edges = np.roll(corners, -1) - corners
        turns = (np.conj(edges) * np.roll(edges, -1)).imag
        return bool(np.all(turns >= -tol))

    @property
    def numerical_radius(self) -> float:
        return float(np.abs(self.vertices).max())


def _entries(T: MatrixLike) -> np.ndarray:
    A = T.entries if isinstance(T, OperatorMatrix) else np.asarray(T, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def numerical_range_hull(T: MatrixLike, angles: int = 360) -> ConvexPolygon:
    """
    Support-function sweep of W(T).

    For theta_k = 2 pi k / angles, the top eigenpair (h_k, x) of the Hermitian part of
    e^(-i theta_k) T gives the boundary point <T x, x> and the supporting line
    Re(e^(-i theta_k) z) = h_k.
    """
    if angles < 8:
        raise ValueError(f"numerical_range_hull needs at least 8 angles, got {angles}")
    A = _entries(T)
    n = A.shape[0]
    theta = 2 * np.pi * np.arange(angles) / angles
    normals = np.exp(1j * theta)
    vertices = np.empty(angles, dtype=complex)
    support = np.empty(angles, dtype=float)
    for k, rotation in enumerate(normals):
        H = (np.conj(rotation) * A + rotation * A.conj().T) / 2
        try:
            values, vectors = eigh(H, subset_by_index=[n - 1, n - 1])
        except LinAlgError as e:
            raise NumericalError(f"eigen-solver failed at theta={theta[k]:.6g}: {e}") from e
        x = vectors[:, 0]
        vertices[k] = np.vdot(x, A @ x)
        support[k] = values[0]
    logger.debug("numerical_range_hull: %d x %d matrix, %d angles", n, n, angles)
    return ConvexPolygon(vertices, normals, support)


def numerical_radius(polygon: ConvexPolygon) -> float:
    """max |vertex| of the hull, a lower bound of the numerical radius."""
    return polygon.numerical_radius


def berezin_in_numrange_check(
    T: MatrixLike, gamma: int, cloud: RangeCloud, angles: int = 720
) -> float:
    """Largest signed distance from the Berezin samples of T to its numerical-range hull."""
    polygon = numerical_range_hull(T, angles)
    distance = float(polygon.signed_distance(cloud.values).max())
    logger.debug("Berezin-in-numerical-range (gamma=%d): max signed distance %.3e", gamma, distance)
    return distance
