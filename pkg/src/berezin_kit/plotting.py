"""Static SVG scatter plots of sampled Berezin ranges."""

import logging
from pathlib import Path
from typing import Optional, Union

from matplotlib import rc_context
from matplotlib.figure import Figure

from .berezin import RangeCloud

logger = logging.getLogger(__name__)

# Above this many points the scatter layer is embedded as an image.
RASTERIZE_ABOVE = 20000


def plot_window(cloud: RangeCloud, alpha: Optional[complex] = None, gamma: int = 1) -> tuple:
    """
    Square window [-0.1, hi + 0.1] x [-(hi + 0.2)/2, (hi + 0.2)/2].

    hi is (1 + |alpha|)^gamma for Blaschke clouds and the largest sampled real part
    (at least 1) otherwise.
    """
    if alpha is not None:
        hi = (1 + abs(alpha)) ** gamma
    else:
        hi = max(1.0, float(cloud.values.real.max()))
    half = (hi + 0.2) / 2
    return (-0.1, hi + 0.1), (-half, half)


def write_range_svg(
    cloud: RangeCloud,
    path: Union[str, Path],
    alpha: Optional[complex] = None,
    gamma: int = 1,
    title: Optional[str] = None,
) -> Path:
    """Write the cloud as a scatter plot; identical clouds give byte-identical files."""
    path = Path(path)
    xlim, ylim = plot_window(cloud, alpha, gamma)
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot(111)
    ax.scatter(
        cloud.values.real,
        cloud.values.imag,
        s=0.5,
        c="tab:blue",
        linewidths=0,
        rasterized=len(cloud) > RASTERIZE_ABOVE,
    )
    ax.set_xlim(*xlim)
    ax.set_ylim(*ylim)
    ax.set_aspect("equal")
    ax.axhline(0.0, color="0.7", linewidth=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    with rc_context({"svg.hashsalt": "berezin-kit"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    logger.info("wrote %d points to %s", len(cloud), path)
    return path
