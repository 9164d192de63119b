"""Exact computations with zeta functions of Hilbert schemes of points on planar curves."""

from .jacstrata import HilbertFn, enumerate_admissible, solve_strata, z_h
from .oracle import GermEq, count_ideals, fit, oracle_local_factor
from .report import Verdict
from .ringkit import LPoly, QPoly, QSeries, Ring, WPoly, laurent_substitute, specialize
from .zeta import (
    BUILTIN_GERMS,
    CurveSpec,
    GermSpec,
    check_functional_equation,
    curve_series,
    local_factor,
    rational_zeta,
)

__all__ = [
    "BUILTIN_GERMS",
    "CurveSpec",
    "GermEq",
    "GermSpec",
    "HilbertFn",
    "LPoly",
    "QPoly",
    "QSeries",
    "Ring",
    "Verdict",
    "WPoly",
    "check_functional_equation",
    "count_ideals",
    "curve_series",
    "enumerate_admissible",
    "fit",
    "laurent_substitute",
    "local_factor",
    "oracle_local_factor",
    "rational_zeta",
    "solve_strata",
    "specialize",
    "z_h",
]
