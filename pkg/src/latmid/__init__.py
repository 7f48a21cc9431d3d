"""Lattices over Z_(p), almost self-dual lattices and reduction of forms mod p."""

from .dvr import INF, ValConfig, valuation
from .forms import FpForm, GramForm, asd_thompson, asd_via_middle, dual_lattice, residual_forms
from .isoforms import FormedKGModule, ss_with_form
from .lattices import Lattice, compatible_splitting, lattice_intersection, lattice_sum, middles
from .modrep import GroupRepK, KGModule, semisimplify, stable_lattice
from .pipeline import ReductionReport, reduce_with_form
from .witt import WittClass, springer_residues

__version__ = "0.1.0"

__all__ = [
    "INF",
    "ValConfig",
    "valuation",
    "Lattice",
    "lattice_sum",
    "lattice_intersection",
    "compatible_splitting",
    "middles",
    "GramForm",
    "FpForm",
    "dual_lattice",
    "asd_via_middle",
    "asd_thompson",
    "residual_forms",
    "WittClass",
    "springer_residues",
    "GroupRepK",
    "KGModule",
    "stable_lattice",
    "semisimplify",
    "FormedKGModule",
    "ss_with_form",
    "ReductionReport",
    "reduce_with_form",
]
