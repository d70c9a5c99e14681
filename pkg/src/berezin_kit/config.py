"""Configuration management for berezin-kit."""

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from .kernels import SpaceSpec
from .report import Tolerances

ComplexLike = Union[complex, float, int, str]


def parse_complex(value: ComplexLike) -> complex:
    """Parse a complex number; accepts Python literals and the ``i`` suffix (``0.3+0.4i``)."""
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    text = str(value).strip().replace(" ", "")
    if text.endswith("i"):
        text = text[:-1] + "j"
    try:
        return complex(text)
    except ValueError:
        raise ValueError(f"not a complex number: {value!r}") from None


def parse_complex_list(value) -> list[complex]:
    """Comma-separated string or sequence -> list of complex."""
    if value is None:
        return []
    if isinstance(value, str):
        return [parse_complex(part) for part in value.split(",") if part.strip()]
    if isinstance(value, (int, float, complex)):
        return [complex(value)]
    return [parse_complex(v) for v in value]


def format_complex(value: complex) -> Union[float, str]:
    """Real values stay floats; others become ``re+imi`` strings that parse_complex reads back."""
    value = complex(value)
    if value.imag == 0:
        return value.real
    return f"{value.real!r}{value.imag:+}i"


@dataclass
class SymbolParams:
    """Symbol parameters shared by the commands."""

    gamma: int = 1
    dim: int = 1
    alpha: complex = 0.5
    beta: list[complex] = field(default_factory=list)
    phi0: list[complex] = field(default_factory=lambda: [0.3])
    phi1: list[complex] = field(default_factory=lambda: [0.4])
    xi: Optional[complex] = None
    mu: Optional[complex] = None
    coeffs: list[complex] = field(default_factory=list)
    a: complex = 1.0
    n: list[int] = field(default_factory=lambda: [1])
    perturb: bool = False

    def __post_init__(self):
        self.alpha = parse_complex(self.alpha)
        self.a = parse_complex(self.a)
        for name in ("beta", "phi0", "phi1", "coeffs"):
            setattr(self, name, parse_complex_list(getattr(self, name)))
        if self.xi is not None:
            self.xi = parse_complex(self.xi)
        if self.mu is not None:
            self.mu = parse_complex(self.mu)
        n = self.n
        if isinstance(n, str):
            n = [part for part in n.split(",") if part.strip()]
        elif isinstance(n, int):
            n = [n]
        self.n = [int(v) for v in n]

    @property
    def space(self) -> SpaceSpec:
        return SpaceSpec(self.dim, self.gamma)

    def vector(self, name: str) -> list:
        """A per-factor parameter, a single value repeated over ``dim`` factors."""
        values = list(getattr(self, name))
        if len(values) == 1 and self.dim > 1:
            values = values * self.dim
        if len(values) != self.dim:
            raise ValueError(f"--{name} needs 1 or {self.dim} values, got {len(values)}")
        return values

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "dim": self.dim,
            "alpha": format_complex(self.alpha),
            "beta": [format_complex(v) for v in self.beta],
            "phi0": [format_complex(v) for v in self.phi0],
            "phi1": [format_complex(v) for v in self.phi1],
            "xi": None if self.xi is None else format_complex(self.xi),
            "mu": None if self.mu is None else format_complex(self.mu),
            "coeffs": [format_complex(v) for v in self.coeffs],
            "a": format_complex(self.a),
            "n": list(self.n),
            "perturb": self.perturb,
        }


@dataclass
class SamplingConfig:
    """Sample count, radius and seed of the (z, w) sweeps."""

    samples: int = 200
    radius: float = 0.8
    seed: int = 0


@dataclass
class GridConfig:
    """Polar grid of Berezin range samples."""

    r_count: int = 200
    theta_count: int = 512
    r_max: float = 0.995

    def __post_init__(self):
        if self.r_count < 1 or self.theta_count < 1:
            raise ValueError(f"grid counts must be positive, got {self.r_count},{self.theta_count}")
        if not 0 <= self.r_max < 1:
            raise ValueError(f"r_max must lie in [0, 1), got {self.r_max}")


_SECTIONS = {
    "symbols": SymbolParams,
    "sampling": SamplingConfig,
    "grid": GridConfig,
    "tolerances": Tolerances,
}


def _build(cls, data: dict, section: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown key(s) in {section}: {', '.join(unknown)}")
    return cls(**data)


def _merge(base: dict, overrides: dict) -> dict:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@dataclass
class RunConfig:
    """Main configuration class."""

    command: str = "report"
    symbols: SymbolParams = field(default_factory=SymbolParams)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    tolerances: Tolerances = field(default_factory=Tolerances)
    N: int = 96
    margin: Optional[int] = None
    r_sequence: list[float] = field(default_factory=lambda: [0.9, 0.99, 0.999, 0.9999])
    source: str = "blaschke"
    preset: Optional[str] = None
    out: Optional[str] = None
    svg: Optional[str] = None
    json: bool = False
    timing: bool = True

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> "RunConfig":
        """Load configuration from file or defaults."""
        config = cls()

        # Search for config file
        search_paths = []
        if config_path:
            search_paths.append(Path(config_path))
        search_paths.extend(
            [
                Path.cwd() / ".berezin-kit.yaml",
                Path.cwd() / ".berezin-kit.yml",
                Path.cwd() / ".berezin-kit.json",
            ]
        )

        for path in search_paths:
            if path.exists():
                config = cls.from_yaml(path)
                break

        return config

    @classmethod
    def from_yaml(cls, path: Path) -> "RunConfig":
        """Load configuration from a YAML (or JSON) file."""
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping at the top level")
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown configuration key(s): {', '.join(unknown)}")
        values = dict(data)
        for section, section_cls in _SECTIONS.items():
            if section in values:
                values[section] = _build(section_cls, values[section] or {}, section)
        return cls(**values)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "symbols": self.symbols.to_dict(),
            "sampling": vars(self.sampling).copy(),
            "grid": vars(self.grid).copy(),
            "tolerances": vars(self.tolerances).copy(),
            "N": self.N,
            "margin": self.margin,
            "r_sequence": list(self.r_sequence),
            "source": self.source,
            "preset": self.preset,
            "out": self.out,
            "svg": self.svg,
            "json": self.json,
            "timing": self.timing,
        }

    def to_yaml(self, path: Path) -> None:
        """Save configuration to YAML file."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)

    def with_overrides(self, overrides: dict[str, Any]) -> "RunConfig":
        """A copy with ``overrides`` (nested like to_dict, None meaning unset) applied."""
        return RunConfig.from_dict(_merge(self.to_dict(), overrides))
