"""Berezin transforms and Berezin ranges of composition operators."""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, PrecisionError, WitnessNotFoundError
from .jets import LftSymbol
from .kernels import DiskPoint, ipow, kernel_binomials
from .operators import OperatorMatrix

logger = logging.getLogger(__name__)

# Share of ||K_w||^2 the truncated kernel may lose before berezin_matrix refuses.
KERNEL_TAIL_TOLERANCE = 1e-8
# Vectors of truncated kernels are built this many points at a time.
MATRIX_CHUNK = 4096
# Boundary levels 1 - 10^-k searched by nonconvexity_certificate.
CERTIFICATE_LEVELS = tuple(1 - 10.0 ** (-k) for k in range(1, 10))
# The witness midpoint must sit this far below the real-slice infimum, relatively.
CERTIFICATE_MARGIN = 0.01
# Sampled membership fails beyond this many grid spacings.
MEMBERSHIP_FACTOR = 10.0

GridLike = Union["GridSpec", Sequence]


# Parameter sets of the published Berezin-range pictures, as (gamma, alpha) pairs.
FIGURE_PRESETS: dict[str, list[tuple[int, complex]]] = {
    "gamma-sweep": [(g, 0.5 + 0j) for g in (1, 2, 3, 5, 10, 15)],
    "complex-alpha-hardy": [(1, a) for a in (0.1 + 0.1j, 0.3 + 0.3j, 0.6 + 0.6j)],
    "complex-alpha-bergman": [(2, a) for a in (0.1 + 0.2j, 0.2 + 0.4j, 0.3 + 0.6j)],
    "mirror-pairs": [
        (1, s * a + 0j) for a in (0.1, 0.3, 0.7, 1e-3, 1e-5, 1e-6) for s in (1, -1)
    ]
    + [(1, 0j)],
}


@dataclass(frozen=True)
class GridSpec:
    """Polar sampling grid: ``r_count`` radii in [0, r_max] times ``theta_count`` angles."""

    r_count: int = 200
    theta_count: int = 512
    r_max: float = 0.995

    def __post_init__(self):
        if self.r_count < 1 or self.theta_count < 1:
            raise ValueError(
                f"grid counts must be positive, got {self.r_count} x {self.theta_count}"
            )
        if not 0 <= self.r_max < 1:
            raise ValueError(f"r_max must lie in [0, 1), got {self.r_max}")

    @classmethod
    def of(cls, grid: GridLike) -> "GridSpec":
        if isinstance(grid, GridSpec):
            return grid
        if hasattr(grid, "r_count"):
            return cls(grid.r_count, grid.theta_count, grid.r_max)
        return cls(*grid)

    @property
    def count(self) -> int:
        return self.r_count * self.theta_count

    def points(self) -> np.ndarray:
        """Grid nodes, radius-major."""
        radii = np.linspace(0.0, self.r_max, self.r_count)
        theta = 2 * np.pi * np.arange(self.theta_count) / self.theta_count
        return (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()


def _abs2(w):
    return w.real * w.real + w.imag * w.imag


def _alpha_value(alpha) -> complex:
    if isinstance(alpha, BlaschkeParam):
        return alpha.alpha
    return DiskPoint(alpha).value


@dataclass(frozen=True)
class BlaschkeParam:
    """The disk automorphism phi_alpha(z) = (z - alpha) / (1 - conj(alpha) z)."""

    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", DiskPoint(self.alpha).value)

    def symbol(self) -> LftSymbol:
        return LftSymbol.blaschke(self.alpha)

    def mirrored(self) -> "BlaschkeParam":
        return BlaschkeParam(-self.alpha)

    def __call__(self, z):
        return (z - self.alpha) / (1 - np.conj(self.alpha) * z)


# --- closed forms -------------------------------------------------------------


def _composition_values(gamma: int, phi, w: np.ndarray) -> np.ndarray:
    phi_w = np.asarray(phi(w), dtype=complex)
    if np.any(np.abs(phi_w) >= 1):
        raise DomainError(f"phi(w) leaves the disk (|phi(w)| = {np.max(np.abs(phi_w)):.6g})")
    return ipow((1 - _abs2(w)) / (1 - np.conj(w) * phi_w), gamma)


def berezin_composition(gamma: int, phi, w) -> complex:
    """C_phi~(w) = ((1 - |w|^2) / (1 - conj(w) phi(w)))^gamma for any self-map phi."""
    w = DiskPoint(w).value
    return complex(_composition_values(gamma, phi, np.array([w]))[0])


def _blaschke_values(gamma: int, alpha: complex, w: np.ndarray) -> np.ndarray:
    s = 1 - _abs2(w)
    numerator = s * (1 - np.conj(alpha) * w)
    denominator = s + alpha * np.conj(w) - np.conj(alpha) * w
    return ipow(numerator / denominator, gamma)


def berezin_blaschke(gamma: int, alpha, w) -> complex:
    """
    Berezin transform of C_{phi_alpha} on H_gamma.

    ((1 - |w|^2)(1 - conj(alpha) w) / (1 - |w|^2 + alpha conj(w) - conj(alpha) w))^gamma
    """
    w = DiskPoint(w).value
    return complex(_blaschke_values(gamma, _alpha_value(alpha), np.array([w]))[0])


def blaschke_kernel_factor(alpha, w) -> float:
    """K = (1 - |w|^2) / ((1 - |w|^2)^2 + 4 Im(alpha conj(w))^2)."""
    alpha = _alpha_value(alpha)
    w = DiskPoint(w).value
    s = 1 - _abs2(w)
    return float(s / (s * s + 4 * (alpha * np.conj(w)).imag ** 2))


def berezin_blaschke_decomposed(gamma: int, alpha, w) -> complex:
    """
    The Blaschke transform split into real and imaginary parts: K^gamma (X + iY)^gamma with
    v = conj(alpha) w, X = (1 - |w|^2)(1 - Re v) + 2 (Im v)^2 and
    Y = Im v (1 + |w|^2 - 2 Re v).
    """
    alpha = _alpha_value(alpha)
    w = DiskPoint(w).value
    v = np.conj(alpha) * w
    r2 = _abs2(w)
    x = (1 - r2) * (1 - v.real) + 2 * v.imag**2
    y = v.imag * (1 + r2 - 2 * v.real)
    factor = blaschke_kernel_factor(alpha, w)
    return complex(ipow(factor * complex(x, y), gamma))


def berezin_elliptic(gamma: int, beta: complex, r: float) -> complex:
    """Transform of C_phi for phi(z) = beta z at |w| = r: ((1 - r^2) / (1 - r^2 beta))^gamma."""
    beta = complex(beta)
    if abs(beta) > 1 + 1e-14:
        raise ValueError(f"|beta| must be <= 1, got {abs(beta):.17g}")
    if not 0 <= r < 1:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    r2 = r * r
    return complex(ipow((1 - r2) / (1 - r2 * beta), gamma))


# --- finite sections ------------------------------------------------------------


def _kernel_tail(gamma: int, r2: float, count: int) -> np.ndarray:
    """1 - (1 - r^2)^gamma sum_{k<n} binom r^(2k), for n = 1..count."""
    k = np.arange(count)
    terms = kernel_binomials(gamma, count) * np.power(r2, k)
    return 1 - (1 - r2) ** gamma * np.cumsum(terms)


def _required_size(gamma: int, r2: float, start: int) -> Optional[int]:
    count = max(start, 1)
    while count <= 1 << 20:
        tail = _kernel_tail(gamma, r2, count)
        hits = np.nonzero(tail <= KERNEL_TAIL_TOLERANCE)[0]
        if hits.size:
            return int(hits[0]) + 1
        count *= 2
    return None


def _check_truncation(T: OperatorMatrix, gamma: int, r2: float) -> None:
    tail = _kernel_tail(gamma, r2, T.size)[-1]
    if tail > KERNEL_TAIL_TOLERANCE:
        needed = _required_size(gamma, r2, T.size)
        raise PrecisionError(
            f"a degree-{T.size - 1} kernel keeps only 1 - {tail:.3g} of ||K_w||^2 at "
            f"|w| = {np.sqrt(r2):.6g}",
            required_degree=needed,
        )


def _matrix_values(T: OperatorMatrix, gamma: int, w: np.ndarray) -> np.ndarray:
    if gamma != T.space.gamma:
        raise ValueError(f"gamma = {gamma} does not match the matrix space (gamma = {T.space.gamma})")
    _check_truncation(T, gamma, float(np.max(_abs2(w))) if w.size else 0.0)
    scale = np.sqrt(kernel_binomials(gamma, T.size))[:, None]
    values = np.empty(w.size, dtype=complex)
    for start in range(0, w.size, MATRIX_CHUNK):
        chunk = np.conj(w[start : start + MATRIX_CHUNK])
        powers = np.ones((T.size, chunk.size), dtype=complex)
        if T.size > 1:
            powers[1:] = np.cumprod(np.broadcast_to(chunk, (T.size - 1, chunk.size)), axis=0)
        kappa = scale * powers
        numerator = np.einsum("ij,ij->j", np.conj(kappa), T.entries @ kappa)
        denominator = np.einsum("ij,ij->j", np.conj(kappa), kappa).real
        values[start : start + chunk.size] = numerator / denominator
    return values


def berezin_matrix(T: OperatorMatrix, gamma: int, w) -> complex:
    """
    <T k, k> / <k, k> for the degree-(N-1) truncation k of the kernel at ``w``.

    Raises PrecisionError, with the size that would suffice, when the truncation keeps
    less than 1 - 1e-8 of ||K_w||^2.
    """
    w = DiskPoint(w).value
    return complex(_matrix_values(T, gamma, np.array([w]))[0])


# --- ranges ---------------------------------------------------------------------


@dataclass(frozen=True)
class BerezinSample:
    """One point of a sampled Berezin range: the value of the transform at ``w``."""

    w: complex
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "w", DiskPoint(self.w).value)
        value = complex(self.value)
        if not np.isfinite(value):
            raise ValueError(f"Berezin value at {self.w} is not finite")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True, eq=False)
class RangeCloud:
    """Sampled Berezin range on a polar grid, radius-major."""

    w: np.ndarray
    values: np.ndarray
    r_count: int
    theta_count: int
    r_max: float

    def __post_init__(self):
        if self.w.shape != self.values.shape or self.w.size != self.r_count * self.theta_count:
            raise ValueError(
                f"cloud of {self.values.size} values does not match a "
                f"{self.r_count} x {self.theta_count} grid"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("Berezin values must be finite")

    def sample(self, index: int) -> BerezinSample:
        return BerezinSample(self.w[index], self.values[index])

    @property
    def samples(self) -> list[BerezinSample]:
        return [self.sample(k) for k in range(self.values.size)]

    def __len__(self) -> int:
        return self.values.size

    def grid(self) -> np.ndarray:
        """Values as an (r_count, theta_count) array."""
        return self.values.reshape(self.r_count, self.theta_count)

    def to_csv(self, target) -> None:
        """Write ``w_re,w_im,ber_re,ber_im`` rows with 17 significant digits."""
        table = np.column_stack([self.w.real, self.w.imag, self.values.real, self.values.imag])
        np.savetxt(
            target,
            table,
            fmt="%.17g",
            delimiter=",",
            header="w_re,w_im,ber_re,ber_im",
            comments="",
        )

    def summary(self, alpha: Optional[complex] = None, gamma: int = 1) -> dict[str, Any]:
        """
        Statistics of the cloud.

        With ``alpha`` set, also reports the sampled real slice (nodes on the line through
        0 and alpha) and the clearance around the hole centred at (1 - |alpha|)^gamma / 2.
        """
        modulus = np.abs(self.values)
        smallest = self.sample(int(np.argmin(modulus)))
        result: dict[str, Any] = {
            "count": int(self.values.size),
            "min_modulus": float(modulus.min()),
            "min_modulus_w": [smallest.w.real, smallest.w.imag],
            "max_modulus": float(modulus.max()),
            "real_min": float(self.values.real.min()),
            "real_max": float(self.values.real.max()),
            "imag_max_abs": float(np.abs(self.values.imag).max()),
        }
        if alpha is not None and alpha != 0:
            alpha = complex(alpha)
            on_line = np.abs((self.w * np.conj(alpha)).imag) <= 1e-12
            if np.any(on_line):
                slice_values = self.values[on_line].real
                result["real_slice_min"] = float(slice_values.min())
                result["real_slice_max"] = float(slice_values.max())
            center = (1 - abs(alpha)) ** gamma / 2
            result["hole_center"] = center
            result["hole_clearance"] = float(np.abs(self.values - center).min())
        return result

    def to_dict(self) -> dict[str, Any]:
        return {
            "r_count": self.r_count,
            "theta_count": self.theta_count,
            "r_max": self.r_max,
            "count": int(self.values.size),
        }


def sample_berezin_range(gamma: int, source, grid: GridLike = (200, 512, 0.995)) -> RangeCloud:
    """
    Berezin values over a polar grid.

    Args:
        gamma: Kernel exponent
        source: A BlaschkeParam (closed form), an OperatorMatrix (truncated kernels) or any
            callable self-map phi (closed form for C_phi)
        grid: GridSpec, GridConfig or (r_count, theta_count, r_max)

    Returns:
        The RangeCloud
    """
    spec = GridSpec.of(grid)
    w = spec.points()
    if isinstance(source, BlaschkeParam):
        values = _blaschke_values(gamma, source.alpha, w)
    elif isinstance(source, OperatorMatrix):
        values = _matrix_values(source, gamma, w)
    elif callable(source):
        values = _composition_values(gamma, source, w)
    else:
        raise ValueError(f"Unknown Berezin source: {type(source).__name__}")
    logger.debug(
        "sampled %d Berezin values (%d x %d, r_max=%.4g)",
        w.size,
        spec.r_count,
        spec.theta_count,
        spec.r_max,
    )
    return RangeCloud(w, np.asarray(values, dtype=complex), spec.r_count, spec.theta_count, spec.r_max)


def berezin_number(cloud: RangeCloud) -> float:
    """Sampled sup |C~(w)|; a lower bound of the Berezin number."""
    return float(np.abs(cloud.values).max())


# --- symmetry of the Blaschke range ---------------------------------------------


def symmetry_witness(gamma: int, alpha, w) -> tuple[complex, float]:
    """
    The point lambda = (|w|^2 / |alpha|^2)(alpha^2 / w) with conj(C~(w)) = C~(lambda).

    Returns:
        (lambda, |conj(C~(w)) - C~(lambda)|); |lambda| = |w|. When alpha or w is 0 the
        value is real and w itself is returned.
    """
    alpha = _alpha_value(alpha)
    w = DiskPoint(w).value
    if alpha == 0 or w == 0:
        lam = w
    else:
        lam = np.conj(w) * alpha / np.conj(alpha)
    value = _blaschke_values(gamma, alpha, np.array([w, lam]))
    return complex(lam), float(abs(np.conj(value[0]) - value[1]))


def mirror_identity_defect(gamma: int, alpha, w) -> float:
    """|C~_alpha(w) - C~_{-alpha}(-w)|."""
    alpha = _alpha_value(alpha)
    w = DiskPoint(w).value
    left = _blaschke_values(gamma, alpha, np.array([w]))[0]
    right = _blaschke_values(gamma, -alpha, np.array([-w]))[0]
    return float(abs(left - right))


def real_slice_value(gamma: int, alpha, r: float) -> float:
    """(1 - r |alpha|^2)^gamma, the transform at w = r alpha."""
    alpha = _alpha_value(alpha)
    if abs(r * alpha) >= 1:
        raise DomainError(f"r alpha = {r * alpha} is not inside the unit disk")
    return float((1 - r * abs(alpha) ** 2) ** gamma)


@dataclass(frozen=True)
class NonconvexityWitness:
    """A non-real Berezin value whose real midpoint falls below the real slice."""

    z: complex
    v: complex
    v_conj_partner: complex
    midpoint: float
    real_slice_inf: float
    gap: float
    partner_point: complex
    membership_distance: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "z": [self.z.real, self.z.imag],
            "v": [self.v.real, self.v.imag],
            "v_conj_partner": [self.v_conj_partner.real, self.v_conj_partner.imag],
            "midpoint": self.midpoint,
            "real_slice_inf": self.real_slice_inf,
            "gap": self.gap,
            "partner_point": [self.partner_point.real, self.partner_point.imag],
            "membership_distance": self.membership_distance,
        }


def _membership_distance(cloud: RangeCloud, point: complex) -> float:
    tree = cKDTree(np.column_stack([cloud.values.real, cloud.values.imag]))
    distance, _ = tree.query([point.real, point.imag])
    return float(distance)


def nonconvexity_certificate(
    gamma: int,
    alpha,
    theta_count: int = 720,
    membership_grid: GridLike = (100, 256, 0.995),
) -> NonconvexityWitness:
    """
    Search for a Berezin value v with Im v != 0 and Re v below the real slice.

    v and conj(v) both lie in the range, their midpoint Re v is real, and every real
    point of the range on the alpha-line is at least (1 - |alpha|)^gamma. The search walks
    the circles |z| = 1 - 10^-k, k = 1..9, and stops at the first level with a witness.

    Raises:
        WitnessNotFoundError: alpha = 0 (the range is {1}) or no level produced a witness
    """
    alpha = _alpha_value(alpha)
    if alpha == 0:
        raise WitnessNotFoundError("alpha = 0: the Berezin range is {1}, which is convex")
    inf = (1 - abs(alpha)) ** gamma
    threshold = inf * (1 - CERTIFICATE_MARGIN)
    theta = 2 * np.pi * np.arange(theta_count) / theta_count
    for rho in CERTIFICATE_LEVELS:
        z = rho * np.exp(1j * theta)
        v = _blaschke_values(gamma, alpha, z)
        mask = (np.abs(v.imag) > 1e-9) & (v.real < threshold)
        logger.debug("certificate level rho=%.10f: %d candidate(s)", rho, int(mask.sum()))
        if not np.any(mask):
            continue
        index = int(np.argmax(np.where(mask, inf - v.real, -np.inf)))
        best_z, best_v = complex(z[index]), complex(v[index])
        partner = np.conj(best_z) * alpha / np.conj(alpha)
        cloud = sample_berezin_range(gamma, BlaschkeParam(alpha), membership_grid)
        witness = NonconvexityWitness(
            z=best_z,
            v=best_v,
            v_conj_partner=complex(np.conj(best_v)),
            midpoint=float(best_v.real),
            real_slice_inf=float(inf),
            gap=float(inf - best_v.real),
            partner_point=complex(partner),
            membership_distance=_membership_distance(cloud, complex(best_v.real)),
        )
        logger.info("nonconvexity witness for alpha=%s, gamma=%d: gap %.6g", alpha, gamma, witness.gap)
        return witness
    raise WitnessNotFoundError(
        f"no witness for alpha={alpha}, gamma={gamma} down to |z| = {CERTIFICATE_LEVELS[-1]}"
    )


@dataclass(frozen=True)
class EllipticVerdict:
    """Sampled convexity verdict for the range of C_phi, phi(z) = beta z."""

    beta: complex
    gamma: int
    kind: str  # "point", "segment", "nonconvex" or "inconclusive"
    convex: bool
    real_min: float
    real_max: float
    angular_variation: float
    pair: Optional[tuple[complex, complex]] = None
    midpoint: Optional[complex] = None
    membership_distance: Optional[float] = None
    resolution: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        def pack(value):
            return None if value is None else [value.real, value.imag]

        return {
            "beta": pack(self.beta),
            "gamma": self.gamma,
            "kind": self.kind,
            "convex": self.convex,
            "real_min": self.real_min,
            "real_max": self.real_max,
            "angular_variation": self.angular_variation,
            "pair": None if self.pair is None else [pack(p) for p in self.pair],
            "midpoint": pack(self.midpoint),
            "membership_distance": self.membership_distance,
            "resolution": self.resolution,
        }


def elliptic_convexity_verdict(
    gamma: int, beta: complex, grid: GridLike = (200, 64, 0.995)
) -> EllipticVerdict:
    """
    Convexity of the sampled range of C_{beta z}.

    Real beta in [-1, 1] gives a real segment (a point for beta = 1). For non-real beta the
    range is a curve r -> ((1 - r^2)/(1 - r^2 beta))^gamma; the verdict looks for a pair of
    samples whose midpoint lies farther than 10 grid spacings from the curve.
    """
    beta = complex(beta)
    if abs(beta) > 1 + 1e-14:
        raise ValueError(f"|beta| must be <= 1, got {abs(beta):.17g}")
    cloud = sample_berezin_range(gamma, LftSymbol.linear(beta), grid)
    values = cloud.grid()
    variation = float(np.max(np.abs(values - values[:, :1])))
    common = dict(
        beta=beta,
        gamma=gamma,
        real_min=float(values.real.min()),
        real_max=float(values.real.max()),
        angular_variation=variation,
    )
    if abs(beta.imag) <= 1e-14:
        kind = "point" if np.ptp(values.real) <= 1e-12 else "segment"
        return EllipticVerdict(kind=kind, convex=True, **common)

    curve = values[:, 0]
    resolution = float(np.max(np.abs(np.diff(curve)))) if curve.size > 1 else 0.0
    i, j = np.triu_indices(curve.size, k=1)
    midpoints = (curve[i] + curve[j]) / 2
    tree = cKDTree(np.column_stack([curve.real, curve.imag]))
    distances, _ = tree.query(np.column_stack([midpoints.real, midpoints.imag]))
    worst = int(np.argmax(distances))
    distance = float(distances[worst])
    nonconvex = distance > MEMBERSHIP_FACTOR * resolution
    logger.debug(
        "elliptic beta=%s: midpoint distance %.4g vs resolution %.4g", beta, distance, resolution
    )
    return EllipticVerdict(
        kind="nonconvex" if nonconvex else "inconclusive",
        convex=False,
        pair=(complex(curve[i[worst]]), complex(curve[j[worst]])),
        midpoint=complex(midpoints[worst]),
        membership_distance=distance,
        resolution=resolution,
        **common,
    )
