"""Moduli of holomorphic discs and strips with branch jumps."""

from __future__ import annotations

from .blaschke import BlaschkeProduct, blaschke_make, disc_automorphism
from .indices import (
    STANDARD_INDICES,
    BranchData,
    DiscData,
    fredholm_index,
    glue,
    maslov_combinatorial,
    maslov_from_closing_paths,
)
from .maslov import maslov_winding
from .strips import (
    BOTH,
    MINUS,
    PLUS,
    EvSolution,
    StripComponent,
    StripMap,
    ev_free_end,
    ev_minus_infinity,
    ev_plus_infinity,
    solve_ev,
    strip_components,
    strip_eval,
)

__all__ = [
    "BOTH", "MINUS", "PLUS", "STANDARD_INDICES",
    "BlaschkeProduct", "BranchData", "DiscData", "EvSolution", "StripComponent", "StripMap",
    "blaschke_make", "disc_automorphism", "ev_free_end", "ev_minus_infinity", "ev_plus_infinity",
    "fredholm_index", "glue", "maslov_combinatorial", "maslov_from_closing_paths",
    "maslov_winding", "solve_ev", "strip_components", "strip_eval",
]
