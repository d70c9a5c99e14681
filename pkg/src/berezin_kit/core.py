"""Core Certifier class - runs theorem cells and the default sweep."""

import logging
import math
import time
from dataclasses import replace
from typing import Any, Callable, Optional

import numpy as np

from .berezin import (
    FIGURE_PRESETS,
    BlaschkeParam,
    RangeCloud,
    berezin_blaschke,
    berezin_number,
    elliptic_convexity_verdict,
    mirror_identity_defect,
    nonconvexity_certificate,
    real_slice_value,
    sample_berezin_range,
    symmetry_witness,
)
from .canonical import (
    canonical_cs_symbols_J,
    canonical_cs_symbols_rotation,
    canonical_hermitian_symbols,
    canonical_sa_symbols,
    compdiff_operator,
    sum_operator,
)
from .certify import cs_defect, matrix_cs_defect, matrix_sa_defect, sa_defect
from .config import RunConfig, SymbolParams
from .conjugations import RotationConjugation, StandardConjugation
from .errors import BerezinKitError
from .jets import LftSymbol, ProductSymbol, TruncatedSeries, WeightSymbol
from .kernels import SpaceSpec
from .numrange import berezin_in_numrange_check, boundary_decay_probe, numerical_range_hull
from .operators import CompositionOperator, WeightedCompositionOperator, operator_matrix
from .report import Report, ReportRecord, Tolerances, Verdict, classify
from .sampling import point_pairs

logger = logging.getLogger(__name__)

# psi is multiplied by 1 + 0.1 z in negative-control runs.
PERTURBATION = TruncatedSeries([1.0, 0.1])
# Finite sections agree with the closed forms to this accuracy.
MATRIX_TOLERANCES = Tolerances(1e-6, 1e-4)
# |lambda| at the last radius must fall below this.
DECAY_TOLERANCES = Tolerances(0.01, 0.01)
# Radii of the Berezin samples compared with the numerical-range hull.
HULL_CLOUD = (24, 64, 0.8)
# Grid used to confirm the range {1} when alpha = 0.
TRIVIAL_GRID = (50, 64, 0.995)

DEFAULT_NUMRANGE_COEFFS = [1.0, 1.0]
DEFAULT_NUMRANGE_BETA = [0.5, 1 / 3]


class Certifier:
    """
    Runs the certification cells behind the CLI commands.

    Example usage:
        certifier = Certifier(RunConfig())
        records = certifier.cs_check()
        report = certifier.report()
        print(report.to_json())
    """

    def __init__(self, config: Optional[RunConfig] = None):
        """
        Initialize the certifier.

        Args:
            config: Optional configuration object
        """
        self.config = config or RunConfig()

    # --- helpers -------------------------------------------------------------

    def _record(
        self,
        theorem: str,
        params: dict,
        run: Callable[[], tuple[float, dict]],
        tolerances: Optional[Tolerances] = None,
    ) -> ReportRecord:
        tolerances = tolerances or self.config.tolerances
        start = time.perf_counter()
        defect, extra = run()
        elapsed = (time.perf_counter() - start) * 1000 if self.config.timing else 0.0
        params = {**params, **extra}
        if tolerances is not self.config.tolerances:
            params["pass_below"] = tolerances.pass_below
            params["fail_above"] = tolerances.fail_above
        verdict = classify(defect, tolerances)
        logger.info("%s: defect %.3e -> %s", theorem, defect, verdict.value)
        return ReportRecord(
            theorem=theorem,
            params=params,
            defect=defect,
            verdict=verdict,
            runtime_ms=round(elapsed, 3),
            seed=self.config.sampling.seed,
        )

    def _perturbed(self, weights: tuple, p: SymbolParams) -> tuple:
        if not p.perturb:
            return weights
        return (ProductSymbol((weights[0], PERTURBATION)),) + tuple(weights[1:])

    def _sample_args(self) -> dict:
        s = self.config.sampling
        return {"samples": s.samples, "radius": s.radius, "seed": s.seed}

    # --- symmetry and self-adjointness ---------------------------------------------

    def cs_check(self, p: Optional[SymbolParams] = None) -> list[ReportRecord]:
        """
        Complex symmetry of the canonical operator.

        The rotation conjugation C_{mu, xi} (and a generalized sum) is used when xi or mu
        is set, the standard conjugation J (and D_{n, psi, phi}) otherwise.
        """
        p = p or self.config.symbols
        if p.xi is not None or p.mu is not None:
            if p.dim != 1:
                raise ValueError("the rotation conjugation acts on one variable; use --dim 1")
            xi = 1 if p.xi is None else p.xi
            mu = 1 if p.mu is None else p.mu
            coeffs = p.coeffs or [1.0, 0.5]
            conj = RotationConjugation(mu, xi)
            weights, phi = canonical_cs_symbols_rotation(p.gamma, xi, p.phi0[0], p.phi1[0], coeffs)
            op = sum_operator(p.gamma, (self._perturbed(weights, p), phi))
            theorem = "rotation-symmetry"
            params = {"gamma": p.gamma, "xi": xi, "mu": mu, "phi0": p.phi0[0], "phi1": p.phi1[0], "c": coeffs}
        else:
            conj = StandardConjugation()
            n = p.vector("n")
            weights, lfts = canonical_cs_symbols_J(p.space, n, p.vector("phi0"), p.vector("phi1"), p.a)
            op = compdiff_operator(p.space, n, (self._perturbed(weights, p), lfts))
            theorem = "J-symmetry"
            params = {
                "gamma": p.gamma,
                "dim": p.dim,
                "n": n,
                "phi0": p.vector("phi0"),
                "phi1": p.vector("phi1"),
                "a": p.a,
            }
        params["perturb"] = p.perturb

        records = [
            self._record(theorem, params, lambda: (cs_defect(op, conj, **self._sample_args()), {}))
        ]
        if op.space.d == 1:
            matrix_params = {**params, "N": self.config.N, "margin": self._margin()}
            records.append(
                self._record(
                    f"{theorem}/finite-section",
                    matrix_params,
                    lambda: (matrix_cs_defect(op, conj, self.config.N, self._margin()), {}),
                    MATRIX_TOLERANCES,
                )
            )
        return records

    def sa_check(self, p: Optional[SymbolParams] = None) -> list[ReportRecord]:
        """Self-adjointness of D_{n, psi, phi}, or Hermitian generalized sums when coeffs are set."""
        p = p or self.config.symbols
        if p.coeffs:
            if p.dim != 1:
                raise ValueError("generalized sums act on one variable; use --dim 1")
            weights, phi = canonical_hermitian_symbols(p.gamma, p.phi0[0], p.phi1[0], p.coeffs)
            op = sum_operator(p.gamma, (self._perturbed(weights, p), phi))
            theorem = "hermitian-sum"
            params = {"gamma": p.gamma, "phi0": p.phi0[0], "phi1": p.phi1[0], "c": p.coeffs}
        else:
            n = p.vector("n")
            weights, lfts = canonical_sa_symbols(p.space, n, p.vector("phi0"), p.vector("phi1"), p.a)
            op = compdiff_operator(p.space, n, (self._perturbed(weights, p), lfts))
            theorem = "self-adjoint"
            params = {
                "gamma": p.gamma,
                "dim": p.dim,
                "n": n,
                "phi0": p.vector("phi0"),
                "phi1": p.vector("phi1"),
                "a": p.a,
            }
        params["perturb"] = p.perturb

        records = [self._record(theorem, params, lambda: (sa_defect(op, **self._sample_args()), {}))]
        if op.space.d == 1:
            matrix_params = {**params, "N": self.config.N, "margin": self._margin()}
            records.append(
                self._record(
                    f"{theorem}/finite-section",
                    matrix_params,
                    lambda: (matrix_sa_defect(op, self.config.N, self._margin()), {}),
                    MATRIX_TOLERANCES,
                )
            )
        return records

    def _margin(self) -> int:
        return self.config.N // 3 if self.config.margin is None else self.config.margin

    # --- Berezin ranges -----------------------------------------------------------

    def berezin_source(self, p: Optional[SymbolParams] = None, source: Optional[str] = None):
        """The Berezin source selected by ``source``: blaschke, elliptic or matrix."""
        p = p or self.config.symbols
        source = (source or self.config.source).lower()
        if source == "blaschke":
            return BlaschkeParam(p.alpha)
        elif source == "elliptic":
            beta = p.beta[0] if p.beta else 0.5
            return LftSymbol.linear(beta)
        elif source == "matrix":
            op = CompositionOperator(SpaceSpec(1, p.gamma), BlaschkeParam(p.alpha).symbol())
            return operator_matrix(op, self.config.N)
        else:
            raise ValueError(f"Unknown Berezin source: {source}")

    def berezin_cloud(
        self, p: Optional[SymbolParams] = None, source: Optional[str] = None
    ) -> tuple[RangeCloud, dict[str, Any]]:
        """Sample the Berezin range and summarize it."""
        p = p or self.config.symbols
        source = (source or self.config.source).lower()
        cloud = sample_berezin_range(p.gamma, self.berezin_source(p, source), self.config.grid)
        alpha = p.alpha if source in ("blaschke", "matrix") else None
        summary: dict[str, Any] = {"gamma": p.gamma, "source": source}
        if alpha is not None:
            summary["alpha"] = alpha
        else:
            summary["beta"] = p.beta[0] if p.beta else 0.5
        summary["grid"] = cloud.to_dict()
        summary.update(cloud.summary(alpha, p.gamma))
        summary["berezin_number"] = berezin_number(cloud)
        return cloud, summary

    def preset_members(self, name: str) -> list[SymbolParams]:
        """SymbolParams for each (gamma, alpha) of a figure preset."""
        if name not in FIGURE_PRESETS:
            raise ValueError(f"Unknown preset: {name} (choose from {', '.join(FIGURE_PRESETS)})")
        base = self.config.symbols
        return [replace(base, gamma=g, alpha=a, dim=1) for g, a in FIGURE_PRESETS[name]]

    # --- numerical ranges -------------------------------------------------------

    def numrange_symbols(self, p: Optional[SymbolParams] = None) -> list[tuple]:
        """psi_j(z) = c_j z^(j-1), phi_j(z) = beta_j z."""
        p = p or self.config.symbols
        coeffs = p.coeffs or DEFAULT_NUMRANGE_COEFFS
        beta = p.beta or DEFAULT_NUMRANGE_BETA
        if len(coeffs) != len(beta):
            raise ValueError(f"--coeffs and --beta need the same length, got {len(coeffs)} and {len(beta)}")
        return [
            (WeightSymbol(c, j, 0, 1), LftSymbol.linear(b))
            for j, (c, b) in enumerate(zip(coeffs, beta))
        ]

    def numrange(self, p: Optional[SymbolParams] = None) -> list[ReportRecord]:
        """Boundary decay of lambda_{r xi} and Berezin samples inside the hull of the finite section."""
        p = p or self.config.symbols
        symbols = self.numrange_symbols(p)
        xi = 1 if p.xi is None else p.xi
        r_sequence = list(self.config.r_sequence)
        params = {
            "gamma": 1,
            "c": [complex(psi.a) for psi, _ in symbols],
            "beta": [complex(phi.b1) for _, phi in symbols],
            "xi": xi,
        }

        def decay():
            magnitudes = boundary_decay_probe(symbols, xi, r_sequence)
            monotone = all(b < a for a, b in zip(magnitudes, magnitudes[1:]))
            return magnitudes[-1], {"r_sequence": r_sequence, "magnitudes": magnitudes, "monotone": monotone}

        def containment():
            space = SpaceSpec(1, 1)
            matrices = [
                operator_matrix(WeightedCompositionOperator(space, psi, phi), self.config.N)
                for psi, phi in symbols
            ]
            T = matrices[0]
            for M in matrices[1:]:
                T = T + M
            cloud = sample_berezin_range(1, T, HULL_CLOUD)
            distance = berezin_in_numrange_check(T, 1, cloud)
            polygon = numerical_range_hull(T)
            extra = {
                "N": self.config.N,
                "max_signed_distance": distance,
                "hull_convex": polygon.is_convex(),
                "numerical_radius": polygon.numerical_radius,
                "berezin_number": berezin_number(cloud),
            }
            defect = max(distance, 0.0) if polygon.is_convex() else math.inf
            return defect, extra

        return [
            self._record("zero-in-closure", params, decay, DECAY_TOLERANCES),
            self._record("berezin-in-numrange", params, containment),
        ]

    # --- geometry of Blaschke ranges ---------------------------------------------------

    def certify_nonconvex(self, p: Optional[SymbolParams] = None) -> ReportRecord:
        """Nonconvexity witness for alpha != 0; for alpha = 0 a record that the range is {1}."""
        p = p or self.config.symbols
        alpha = complex(p.alpha)
        params: dict[str, Any] = {"gamma": p.gamma, "alpha": alpha}

        if alpha == 0:

            def trivial():
                cloud = sample_berezin_range(p.gamma, BlaschkeParam(0), TRIVIAL_GRID)
                return float(np.abs(cloud.values - 1).max()), {"convex": True, "range": [1.0]}

            return self._record("blaschke-nonconvexity", params, trivial)

        def certificate():
            witness = nonconvexity_certificate(p.gamma, alpha)
            r = np.linspace(-0.99, 0.99, 41) / abs(alpha)
            r = r[np.abs(r * alpha) < 1 - 1e-9]
            slice_defect = max(
                abs(berezin_blaschke(p.gamma, alpha, ri * alpha) - real_slice_value(p.gamma, alpha, ri))
                for ri in r
            )
            extra = {"convex": False, "witness": witness.to_dict(), "real_slice_defect": slice_defect}
            defect = max(slice_defect, 0.0 if witness.gap > 0 else math.inf)
            return defect, extra

        return self._record("blaschke-nonconvexity", params, certificate)

    def elliptic(self, gamma: int, beta: complex) -> ReportRecord:
        """Convexity verdict of the range of C_{beta z}: real beta convex, non-real beta not."""
        params = {"gamma": gamma, "beta": complex(beta)}

        def run():
            verdict = elliptic_convexity_verdict(gamma, beta)
            extra = verdict.to_dict()
            if verdict.kind in ("point", "segment"):
                # real values in (0, 1] without angular variation
                defect = verdict.angular_variation + max(0.0, verdict.real_max - 1.0)
                defect += 0.0 if verdict.real_min > 0 else math.inf
            else:
                defect = 0.0 if verdict.kind == "nonconvex" else math.inf
            return defect, extra

        return self._record("elliptic-convexity", params, run)

    def symmetry(self, gamma: int, alpha: complex) -> ReportRecord:
        """conj(C~(w)) = C~(lambda) with |lambda| = |w| over sampled w."""
        params = {"gamma": gamma, "alpha": complex(alpha)}

        def run():
            s = self.config.sampling
            _, w = point_pairs(1, s.samples, s.radius, s.seed)
            worst = 0.0
            for wk in w[0]:
                lam, residual = symmetry_witness(gamma, alpha, wk)
                worst = max(worst, residual, abs(abs(lam) - abs(wk)))
            return worst, {"samples": s.samples}

        return self._record("conjugation-symmetry", params, run)

    def mirror(self, gamma: int, alpha: complex) -> ReportRecord:
        """C~_alpha(w) = C~_{-alpha}(-w) over sampled w."""
        params = {"gamma": gamma, "alpha": complex(alpha)}

        def run():
            s = self.config.sampling
            _, w = point_pairs(1, s.samples, s.radius, s.seed)
            return max(mirror_identity_defect(gamma, alpha, wk) for wk in w[0]), {"samples": s.samples}

        return self._record("mirror-identity", params, run)

    # --- the default sweep -------------------------------------------------------------

    def _cells(self) -> list[tuple[str, Callable[[], Any]]]:
        base = self.config.symbols
        perturb = base.perturb

        def symbols(**values) -> SymbolParams:
            return SymbolParams(perturb=perturb, **values)

        cells: list[tuple[str, Callable[[], Any]]] = [
            ("J-symmetry", lambda: self.cs_check(symbols(gamma=2, n=[1], phi0=[0.3], phi1=[0.4]))),
            (
                "J-symmetry",
                lambda: self.cs_check(
                    symbols(gamma=1, dim=2, n=[0, 1], phi0=[0.2, 0.1], phi1=[0.3, 0.3], a=2)
                ),
            ),
            (
                "J-symmetry",
                lambda: self.cs_check(
                    symbols(gamma=3, dim=3, n=[1, 2, 0], phi0=[0.2, -0.1, 0.1j], phi1=[0.3, 0.3, 0.2])
                ),
            ),
            (
                "rotation-symmetry",
                lambda: self.cs_check(symbols(gamma=1, xi=-1, mu=1, phi0=[0.3], phi1=[0.2], coeffs=[1, 0.5])),
            ),
            (
                "rotation-symmetry",
                lambda: self.cs_check(symbols(gamma=2, xi=1j, mu=-1j, phi0=[0.2], phi1=[0.1], coeffs=[0.5])),
            ),
            ("self-adjoint", lambda: self.sa_check(symbols(gamma=1, n=[1], phi0=[0.2 + 0.1j], phi1=[0.3]))),
            (
                "self-adjoint",
                lambda: self.sa_check(
                    symbols(gamma=2, dim=2, n=[1, 1], phi0=[0.1, 0.2j], phi1=[0.2, 0.2], a=0.5)
                ),
            ),
            (
                "hermitian-sum",
                lambda: self.sa_check(symbols(gamma=2, phi0=[0.3j], phi1=[0.2], coeffs=[1, -0.5])),
            ),
            ("zero-in-closure", lambda: self.numrange(SymbolParams())),
        ]
        for beta in (-1, -0.5, 0, 0.5, 1, 1j):
            cells.append(("elliptic-convexity", lambda beta=beta: self.elliptic(1, beta)))
        for gamma, alpha in ((1, 0.5), (2, 0.3 + 0.4j), (3, 0.6j)):
            cells.append(("conjugation-symmetry", lambda g=gamma, a=alpha: self.symmetry(g, a)))
        for gamma in (1, 2, 3):
            for alpha in (0.1, 0.3, 0.5, 0.7):
                cells.append(
                    (
                        "blaschke-nonconvexity",
                        lambda g=gamma, a=alpha: self.certify_nonconvex(SymbolParams(gamma=g, alpha=a)),
                    )
                )
        cells.append(
            ("blaschke-nonconvexity", lambda: self.certify_nonconvex(SymbolParams(gamma=1, alpha=0)))
        )
        for gamma, alpha in ((1, 0.1), (2, 0.3 + 0.4j), (3, 0.6j)):
            cells.append(("mirror-identity", lambda g=gamma, a=alpha: self.mirror(g, a)))
        return cells

    def report(self) -> Report:
        """
        Run the default sweep over every theorem cell.

        A cell that raises is recorded as failed with the error message.

        Returns:
            The aggregate Report
        """
        report = Report()
        for theorem, run in self._cells():
            try:
                result = run()
            except (BerezinKitError, ValueError) as e:
                logger.warning("%s: %s", theorem, e)
                report.add(
                    ReportRecord(
                        theorem=theorem,
                        params={"error": str(e)},
                        defect=math.nan,
                        verdict=Verdict.FAIL,
                        seed=self.config.sampling.seed,
                    )
                )
                continue
            for record in result if isinstance(result, list) else [result]:
                report.add(record)
        logger.info("report: %s", report.counts())
        return report
