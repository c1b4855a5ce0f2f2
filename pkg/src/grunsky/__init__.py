"""Generalized Grunsky operators for n-tuples of non-overlapping conformal
maps of the unit disk, computed as truncated block matrices on Bergman
spaces, together with the period datum built from them."""

from .bergman import BergmanElement, build_quadrature, inner_product, reflect, unreflect
from .errors import GrunskyError, NumericalError, ValidationError
from .maps import (
    ConformalMapModel,
    MobiusTransform,
    PreSchwarzianFamily,
    Rigging,
    evaluate,
    post_compose_mobius,
    schwarzian,
    solve_pre_schwarzian,
    validate_rigging,
)
from .operator import (
    GrunskyBlock,
    GrunskyOperator,
    assemble,
    block_quadrature,
    block_series,
    operator_norm,
    truncation_sweep,
)
from .period import (
    PeriodDatum,
    RecoveryReport,
    check_mobius_invariance,
    holomorphy_probe,
    normalize_rigging,
    period,
    recover_jets,
)
from .series import PowerSeries, compose, exp, mul, reciprocal

__all__ = [
    "BergmanElement", "build_quadrature", "inner_product", "reflect", "unreflect",
    "GrunskyError", "NumericalError", "ValidationError",
    "ConformalMapModel", "MobiusTransform", "PreSchwarzianFamily", "Rigging", "evaluate",
    "post_compose_mobius", "schwarzian", "solve_pre_schwarzian", "validate_rigging",
    "GrunskyBlock", "GrunskyOperator", "assemble", "block_quadrature", "block_series",
    "operator_norm", "truncation_sweep",
    "PeriodDatum", "RecoveryReport", "check_mobius_invariance", "holomorphy_probe",
    "normalize_rigging", "period", "recover_jets",
    "PowerSeries", "compose", "exp", "mul", "reciprocal",
]
