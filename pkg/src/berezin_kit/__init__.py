"""
berezin-kit - Berezin transforms of weighted composition operators

Certify complex symmetry and self-adjointness on H_gamma(D^d) and sample
Berezin ranges of composition operators on the disk.
"""

from .berezin import (
    BlaschkeParam,
    RangeCloud,
    berezin_blaschke,
    berezin_matrix,
    elliptic_convexity_verdict,
    nonconvexity_certificate,
    sample_berezin_range,
)
from .certify import cs_defect, matrix_cs_defect, matrix_sa_defect, sa_defect
from .config import RunConfig, SymbolParams
from .conjugations import create_conjugation
from .core import Certifier
from .jets import LftSymbol, TruncatedSeries, WeightSymbol
from .kernels import SpaceSpec, kernel_eval
from .numrange import numerical_range_hull, numrange_point
from .operators import create_operator, operator_matrix
from .report import Report, ReportRecord, Verdict

__version__ = "0.1.0"
__all__ = [
    "Certifier",
    "RunConfig",
    "SymbolParams",
    "SpaceSpec",
    "kernel_eval",
    "TruncatedSeries",
    "LftSymbol",
    "WeightSymbol",
    "create_conjugation",
    "create_operator",
    "operator_matrix",
    "cs_defect",
    "sa_defect",
    "matrix_cs_defect",
    "matrix_sa_defect",
    "BlaschkeParam",
    "RangeCloud",
    "berezin_blaschke",
    "berezin_matrix",
    "sample_berezin_range",
    "nonconvexity_certificate",
    "elliptic_convexity_verdict",
    "numrange_point",
    "numerical_range_hull",
    "Report",
    "ReportRecord",
    "Verdict",
]
