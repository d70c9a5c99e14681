"""Seeded point sampling in the polydisk."""

import numpy as np
from scipy.stats import qmc


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the same seed gives the same stream on every platform."""
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


def point_pairs(d: int, count: int, radius: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """
    ``count`` pairs (z, w) of points in the polydisk of the given radius.

    Points come from a scrambled Sobol sequence in the unit cube of dimension 4d, mapped
    coordinatewise to r = radius * sqrt(u), theta = 2 pi u' so that they are uniform
    in area.

    Returns:
        (z, w), each of shape (d, count)
    """
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    if not 0 < radius < 1:
        raise ValueError(f"sample radius must lie in (0, 1), got {radius}")
    sobol = qmc.Sobol(d=4 * d, scramble=True, seed=make_rng(seed))
    m = max(int(np.ceil(np.log2(count))), 0)
    u = sobol.random_base2(m)[:count]
    r = radius * np.sqrt(u[:, 0::2])
    theta = 2 * np.pi * u[:, 1::2]
    points = (r * np.exp(1j * theta)).T
    return points[:d], points[d:]
