"""Exception types raised by berezin-kit."""

from typing import Optional


class BerezinKitError(Exception):
    """Base class for all berezin-kit errors."""


class DomainError(BerezinKitError, ValueError):
    """A point or symbol value falls outside the open disk (or polydisk)."""


class SelfMapError(DomainError):
    """A composition symbol fails the sampled self-map check."""

    def __init__(self, margin: float, message: Optional[str] = None):
        self.margin = margin
        super().__init__(
            message or f"symbol is not a self-map of the disk (self_map_margin={margin:.6g})"
        )


class UnsupportedFeatureError(BerezinKitError, NotImplementedError):
    """The requested operator/conjugation pairing has no implementation."""


class PrecisionError(BerezinKitError):
    """A truncation is too short for the requested accuracy."""

    def __init__(self, message: str, required_degree: Optional[int] = None):
        self.required_degree = required_degree
        if required_degree is not None:
            message = f"{message} (try N >= {required_degree})"
        super().__init__(message)


class WitnessNotFoundError(BerezinKitError):
    """A certificate search exhausted its grid."""


class NumericalError(BerezinKitError):
    """A numerical routine (eigen-solver, hull) did not converge."""
