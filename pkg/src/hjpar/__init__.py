"""Finite partition properties of word spaces: witnesses, exact numbers and bounds."""

from __future__ import annotations

from .bounds import (BigBound, compare, f13_alpha_bound, f13_bound, gowers_W_bound, grzegorczyk_E,
                     hj_bound, hj_bound_product, le, ram_bound, ramsey_R_bound)
from .colorings import Coloring, SetColoring, make_coloring
from .core import ConvexSubspace, GridPattern, PartialWord
from .equivalences import AlphaIso, FullSym, Subgroup
from .exact import BudgetExceeded, Certificate, NumberKind, exact_number
from .pipelines import hj_dim_reduce, hj_extract, par_alpha_extract, par_full_extract
from .search import find_grid_pattern, find_mono_subspace, find_par_witness

__version__ = "0.1.0"

__all__ = [
    "AlphaIso", "BigBound", "BudgetExceeded", "Certificate", "Coloring", "ConvexSubspace",
    "FullSym", "GridPattern", "NumberKind", "PartialWord", "SetColoring", "Subgroup",
    "compare", "exact_number", "f13_alpha_bound", "f13_bound", "find_grid_pattern",
    "find_mono_subspace", "find_par_witness", "gowers_W_bound", "grzegorczyk_E", "hj_bound",
    "hj_bound_product", "hj_dim_reduce", "hj_extract", "le", "make_coloring",
    "par_alpha_extract", "par_full_extract", "ram_bound", "ramsey_R_bound",
]
