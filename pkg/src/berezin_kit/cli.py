"""Command-line interface for berezin-kit."""

import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import click
import yaml
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from .config import RunConfig, parse_complex, parse_complex_list
from .core import Certifier
from .errors import NumericalError, PrecisionError, UnsupportedFeatureError, WitnessNotFoundError
from .plotting import write_range_svg
from .report import Report, Verdict, jsonable

console = Console()
err_console = Console(stderr=True)

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 64, 74

VERDICT_STYLE = {
    Verdict.PASS: "[green]pass[/green]",
    Verdict.FAIL: "[red]fail[/red]",
    Verdict.INCONCLUSIVE: "[yellow]inconclusive[/yellow]",
}


class UsageError(click.UsageError):
    """Invalid parameters; exits with status 64."""

    exit_code = EXIT_USAGE


class ComplexType(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return parse_complex(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


class ComplexListType(click.ParamType):
    name = "complex,..."

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return parse_complex_list(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


class NumberListType(click.ParamType):
    """Comma-separated ints or floats."""

    def __init__(self, cast, name: str):
        self.cast = cast
        self.name = name

    def convert(self, value, param, ctx):
        if isinstance(value, list):
            return value
        try:
            return [self.cast(part) for part in str(value).split(",") if part.strip()]
        except ValueError:
            self.fail(f"expected {self.name}, got {value!r}", param, ctx)


class PairType(click.ParamType):
    """Two comma-separated numbers."""

    def __init__(self, cast, name: str):
        self.cast = cast
        self.name = name

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        parts = [p for p in str(value).split(",") if p.strip()]
        try:
            if len(parts) != 2:
                raise ValueError
            return tuple(self.cast(p) for p in parts)
        except ValueError:
            self.fail(f"expected {self.name}, got {value!r}", param, ctx)


COMPLEX = ComplexType()
COMPLEX_LIST = ComplexListType()
INT_LIST = NumberListType(int, "int,...")
FLOAT_LIST = NumberListType(float, "float,...")
GRID = PairType(int, "R,T")
TOL = PairType(float, "PASS,FAIL")


def common_options(f: Callable) -> Callable:
    """Options shared by every command."""
    options = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML or JSON config file"),
        click.option("--gamma", type=int, help="Kernel exponent (1 = Hardy, 2 = Bergman)"),
        click.option("--dim", type=int, help="Number of disk factors"),
        click.option("--alpha", type=COMPLEX, help="Blaschke parameter"),
        click.option("--beta", type=COMPLEX_LIST, help="Slopes of linear symbols beta z"),
        click.option("--phi0", type=COMPLEX_LIST, help="phi(0) per factor"),
        click.option("--phi1", type=COMPLEX_LIST, help="phi'(0) per factor"),
        click.option("--xi", type=COMPLEX, help="Rotation xi (selects C_{mu,xi})"),
        click.option("--mu", type=COMPLEX, help="Rotation mu (selects C_{mu,xi})"),
        click.option("--coeffs", type=COMPLEX_LIST, help="Coefficients c_j of a generalized sum"),
        click.option("--a", "amplitude", type=COMPLEX, help="Amplitude of psi"),
        click.option("--n", "orders", type=INT_LIST, help="Derivative orders per factor"),
        click.option("--N", "truncation", type=int, help="Finite-section size"),
        click.option("--margin", type=int, help="Rows/columns excluded from matrix defects"),
        click.option("--grid", type=GRID, help="Polar grid R,T"),
        click.option("--rmax", type=float, help="Largest grid radius"),
        click.option("--tol", type=TOL, help="Thresholds PASS,FAIL"),
        click.option("--seed", type=int, help="Sampling seed"),
        click.option("--samples", type=int, help="Number of (z, w) sample pairs"),
        click.option("--radius", type=float, help="Radius of the sample points"),
        click.option("--out", "-o", type=click.Path(), help="Output file (directory with --preset)"),
        click.option("--svg", type=click.Path(), help="SVG output (directory with --preset)"),
        click.option("--json", "as_json", is_flag=True, help="Print machine-readable JSON"),
        click.option("--perturb", is_flag=True, help="Multiply psi by 1 + 0.1z (negative control)"),
        click.option("--no-timing", is_flag=True, help="Report runtime_ms as 0 for reproducible output"),
        click.option("--verbose", "-v", is_flag=True, help="Debug logging"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def setup_logging(verbose: bool) -> None:
    logger = logging.getLogger("berezin_kit")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=err_console, show_path=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def load_config(command: str, options: dict, **extra) -> RunConfig:
    """Config file (or defaults) with command-line flags applied on top."""
    setup_logging(options.pop("verbose", False))
    grid = options.get("grid") or (None, None)
    tol = options.get("tol") or (None, None)
    overrides = {
        "command": command,
        "symbols": {
            "gamma": options.get("gamma"),
            "dim": options.get("dim"),
            "alpha": options.get("alpha"),
            "beta": options.get("beta"),
            "phi0": options.get("phi0"),
            "phi1": options.get("phi1"),
            "xi": options.get("xi"),
            "mu": options.get("mu"),
            "coeffs": options.get("coeffs"),
            "a": options.get("amplitude"),
            "n": options.get("orders"),
            "perturb": True if options.get("perturb") else None,
        },
        "sampling": {
            "samples": options.get("samples"),
            "radius": options.get("radius"),
            "seed": options.get("seed"),
        },
        "grid": {"r_count": grid[0], "theta_count": grid[1], "r_max": options.get("rmax")},
        "tolerances": {"pass_below": tol[0], "fail_above": tol[1]},
        "N": options.get("truncation"),
        "margin": options.get("margin"),
        "out": options.get("out"),
        "svg": options.get("svg"),
        "json": True if options.get("as_json") else None,
        "timing": False if options.get("no_timing") else None,
        **extra,
    }
    try:
        return RunConfig.load(options.get("config_path")).with_overrides(overrides)
    except (ValueError, yaml.YAMLError) as e:
        raise UsageError(str(e))


def run_guarded(work: Callable):
    """Map library errors onto exit statuses."""
    try:
        return work()
    except (WitnessNotFoundError, PrecisionError, NumericalError) as e:
        err_console.print(f"[red]✗[/red] {type(e).__name__}: {e}")
        sys.exit(EXIT_INCONCLUSIVE)
    except (ValueError, UnsupportedFeatureError) as e:
        raise UsageError(str(e))


def write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        err_console.print(f"[red]✗[/red] cannot write {path}: {e}")
        sys.exit(EXIT_IO)


def exit_code(report: Report) -> int:
    counts = report.counts()
    if counts[Verdict.FAIL.value]:
        return EXIT_FAIL
    if counts[Verdict.INCONCLUSIVE.value] or not report.records:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def emit_report(report: Report, config: RunConfig, title: str) -> None:
    """Print and/or write the report, then exit with its status."""
    text = report.to_json()
    if config.out:
        write_text(config.out, text + "\n")
    if config.json:
        click.echo(text)
    else:
        table = Table(title=title)
        table.add_column("theorem")
        table.add_column("verdict")
        table.add_column("defect", justify="right")
        table.add_column("ms", justify="right")
        for record in report.records:
            table.add_row(
                record.theorem,
                VERDICT_STYLE[record.verdict],
                f"{record.defect:.3e}",
                f"{record.runtime_ms:.1f}",
            )
        console.print(table)
        counts = report.counts()
        console.print(
            Panel.fit(
                f"[green]✓[/green] {counts['pass']} passed   "
                f"[red]✗[/red] {counts['fail']} failed   "
                f"[yellow]?[/yellow] {counts['inconclusive']} inconclusive",
                border_style="green" if report.passed else "red",
            )
        )
        if config.out:
            console.print(f"\n📁 Report saved to: [cyan]{config.out}[/cyan]")
    sys.exit(exit_code(report))


@click.group()
@click.version_option(version="0.1.0")
def main():
    """berezin-kit - certify operator identities and sample Berezin ranges on H_gamma."""
    pass


@main.command("cs-check")
@common_options
def cs_check(**options):
    """Complex symmetry of canonical D_{n,psi,phi} (J) or generalized sums (C_{mu,xi})."""
    config = load_config("cs-check", options)
    records = run_guarded(lambda: Certifier(config).cs_check())
    emit_report(Report(records), config, "Complex symmetry")


@main.command("sa-check")
@common_options
def sa_check(**options):
    """Self-adjointness of canonical D_{n,psi,phi}, or Hermitian sums with --coeffs."""
    config = load_config("sa-check", options)
    records = run_guarded(lambda: Certifier(config).sa_check())
    emit_report(Report(records), config, "Self-adjointness")


def _csv_name(gamma: int, alpha: complex) -> str:
    alpha = complex(alpha)
    return f"berezin_g{gamma}_a{alpha.real:g}{alpha.imag:+g}i"


@main.command()
@common_options
@click.option(
    "--source",
    type=click.Choice(["blaschke", "elliptic", "matrix"]),
    help="Closed-form Blaschke, elliptic beta z, or truncated-matrix transform",
)
@click.option("--preset", help="Figure parameter set (writes one file per member)")
def berezin(source: Optional[str], preset: Optional[str], **options):
    """Sample a Berezin range to CSV (w_re,w_im,ber_re,ber_im) and optional SVG."""
    config = load_config("berezin", options, source=source, preset=preset)
    certifier = Certifier(config)

    if config.preset:
        members = run_guarded(lambda: certifier.preset_members(config.preset))
        if config.source != "blaschke":
            raise UsageError("--preset samples Blaschke ranges; drop --source")
    else:
        members = [config.symbols]

    summaries = []
    for params in members:
        if config.json:
            cloud, summary = run_guarded(lambda: certifier.berezin_cloud(params))
        else:
            with console.status(f"[bold green]Sampling gamma={params.gamma}, alpha={params.alpha}..."):
                cloud, summary = run_guarded(lambda: certifier.berezin_cloud(params))
        alpha = params.alpha if config.source in ("blaschke", "matrix") else None
        name = _csv_name(params.gamma, params.alpha)
        try:
            if config.out:
                target = Path(config.out) / f"{name}.csv" if config.preset else Path(config.out)
                if config.preset:
                    target.parent.mkdir(parents=True, exist_ok=True)
                cloud.to_csv(target)
                summary["csv"] = str(target)
            if config.svg:
                target = Path(config.svg) / f"{name}.svg" if config.preset else Path(config.svg)
                if config.preset:
                    target.parent.mkdir(parents=True, exist_ok=True)
                write_range_svg(cloud, target, alpha=alpha, gamma=params.gamma)
                summary["svg"] = str(target)
        except OSError as e:
            err_console.print(f"[red]✗[/red] cannot write output: {e}")
            sys.exit(EXIT_IO)
        summaries.append(jsonable(summary))

    if config.json:
        click.echo(json.dumps(summaries if config.preset else summaries[0], indent=2, ensure_ascii=False))
    else:
        for summary in summaries:
            lines = [f"[bold]{key}:[/bold] {value}" for key, value in summary.items() if key != "grid"]
            console.print(Panel.fit("\n".join(lines), title="Berezin range", border_style="green"))
    sys.exit(EXIT_PASS)


@main.command()
@common_options
@click.option("--r-sequence", type=FLOAT_LIST, help="Radii of the decay probe")
def numrange(r_sequence, **options):
    """Boundary decay of lambda_{r xi} and Ber inside W for sum_j c_j z^(j-1) C_{beta_j z}."""
    config = load_config("numrange", options, r_sequence=r_sequence)
    records = run_guarded(lambda: Certifier(config).numrange())
    emit_report(Report(records), config, "Numerical range")


@main.command("certify-nonconvex")
@common_options
def certify_nonconvex(**options):
    """Nonconvexity witness for the Berezin range of C_{phi_alpha}."""
    config = load_config("certify-nonconvex", options)
    record = run_guarded(lambda: Certifier(config).certify_nonconvex())
    emit_report(Report([record]), config, "Nonconvexity certificate")


@main.command()
@common_options
def report(**options):
    """Run the default sweep over every theorem cell."""
    config = load_config("report", options)
    certifier = Certifier(config)
    if config.json:
        result = run_guarded(certifier.report)
    else:
        with console.status("[bold green]Running theorem cells..."):
            result = run_guarded(certifier.report)
    emit_report(result, config, "Certification report")


if __name__ == "__main__":
    main()
