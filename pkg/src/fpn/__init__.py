"""Finite n-presentations, Betti towers and Ext/Tor over monomial quotient rings."""

__version__ = "0.1.0"

from .field import F2, F3, QQ, FieldSpec
from .core import (
    GradedRing,
    Monomial,
    PatternError,
    RingPattern,
    example_12_pattern,
    example_13_pattern,
    free_pattern,
    truncate_pattern,
)
from .modules import FPModule, GradedFreeModule, HomMatrix, graded_dims, kernel_min_gens, make_module
from .resolution import BettiTable, Resolution, betti_table, minimal_resolution, padded_resolution, schanuel_check
from .homalg import (
    GVModule,
    dual_module,
    duality_check,
    ext_dims,
    rel_flat,
    rel_injective,
    to_gv,
    tor_dims,
)
from .tower import LambdaVerdict, ModulePattern, TowerReport, build_ses, empirical_lambda, tower_betti
from .io import SpecError, parse_spec

__all__ = [
    "BettiTable",
    "F2",
    "F3",
    "FPModule",
    "FieldSpec",
    "GVModule",
    "GradedFreeModule",
    "GradedRing",
    "HomMatrix",
    "LambdaVerdict",
    "ModulePattern",
    "Monomial",
    "PatternError",
    "QQ",
    "Resolution",
    "RingPattern",
    "SpecError",
    "TowerReport",
    "betti_table",
    "build_ses",
    "dual_module",
    "duality_check",
    "empirical_lambda",
    "example_12_pattern",
    "example_13_pattern",
    "ext_dims",
    "free_pattern",
    "graded_dims",
    "kernel_min_gens",
    "make_module",
    "minimal_resolution",
    "padded_resolution",
    "parse_spec",
    "rel_flat",
    "rel_injective",
    "schanuel_check",
    "to_gv",
    "tor_dims",
    "tower_betti",
    "truncate_pattern",
]
