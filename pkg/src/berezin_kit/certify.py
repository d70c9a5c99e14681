"""Defect functionals certifying complex symmetry and self-adjointness."""

import logging
from typing import Optional

import numpy as np

from .conjugations import ConjugationSpec
from .operators import (
    OperatorSpec,
    adjoint_kernel_action,
    kernel_action,
    operator_matrix,
    symmetry_sides,
)
from .sampling import point_pairs

logger = logging.getLogger(__name__)


def residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """
    Largest pointwise residual |lhs - rhs| / max(1, |lhs|, |rhs|).

    The residual is absolute while both sides stay in the unit range and relative above it,
    so large kernel values at high gamma or dimension do not swamp the tolerances.
    """
    lhs = np.asarray(lhs, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return float(np.max(np.abs(lhs - rhs) / scale))


def cs_defect(
    op: OperatorSpec,
    conj: ConjugationSpec,
    samples: int = 200,
    radius: float = 0.8,
    seed: int = 0,
) -> float:
    """
    Sampled defect of T C K_w = C T* K_w over (z, w) pairs with |z_j|, |w_j| <= radius.

    Args:
        op: The operator under test
        conj: The conjugation
        samples: Number of (z, w) pairs
        radius: Polydisk radius of the sample points
        seed: Sampling seed

    Returns:
        Max of |lhs - rhs| / max(1, |lhs|, |rhs|) over the pairs (see ``residual``);
        values below 1e-9 certify the identity on the samples
    """
    z, w = point_pairs(op.space.d, samples, radius, seed)
    lhs, rhs = symmetry_sides(op, conj, w, z)
    defect = residual(lhs, rhs)
    logger.debug("cs_defect over %d pairs (radius %.3g): %.3e", samples, radius, defect)
    return defect


def sa_defect(op: OperatorSpec, samples: int = 200, radius: float = 0.8, seed: int = 0) -> float:
    """Sampled defect of T* K_w = T K_w, in the same capped-relative residual as cs_defect."""
    z, w = point_pairs(op.space.d, samples, radius, seed)
    lhs = adjoint_kernel_action(op, w, z)
    rhs = kernel_action(op, np.conj(w), z)
    defect = residual(lhs, rhs)
    logger.debug("sa_defect over %d pairs (radius %.3g): %.3e", samples, radius, defect)
    return defect


def matrix_cs_defect(
    op: OperatorSpec, conj: ConjugationSpec, N: int = 96, margin: Optional[int] = None
) -> float:
    """
    Finite-section defect max |C T* C - T| on the leading (N - margin) block.

    With C x = U conj(x) in orthonormal coordinates, C T* C = U T^T conj(U).
    """
    if margin is None:
        margin = N // 3
    if not 0 <= margin < N:
        raise ValueError(f"margin must lie in [0, N), got margin={margin}, N={N}")
    T = operator_matrix(op, N).entries
    u = conj.diagonal(N)
    reflected = u[:, None] * T.T * np.conj(u)[None, :]
    keep = N - margin
    defect = float(np.max(np.abs(reflected - T)[:keep, :keep]))
    logger.debug("matrix_cs_defect N=%d margin=%d: %.3e", N, margin, defect)
    return defect


def matrix_sa_defect(op: OperatorSpec, N: int = 96, margin: Optional[int] = None) -> float:
    """Finite-section defect max |T^H - T| on the leading (N - margin) block."""
    if margin is None:
        margin = N // 3
    if not 0 <= margin < N:
        raise ValueError(f"margin must lie in [0, N), got margin={margin}, N={N}")
    T = operator_matrix(op, N).entries
    keep = N - margin
    defect = float(np.max(np.abs(T.conj().T - T)[:keep, :keep]))
    logger.debug("matrix_sa_defect N=%d margin=%d: %.3e", N, margin, defect)
    return defect
