"""Conflict-free edge colouring: verifiers, exact solvers, constructions."""
from ._accel import USE_NUMBA
from .asymptotic import ColourReport, colour_asymptotic, plan
from .bipartite import four_colour_saturating, sixteen_colour, three_colour
from .chromatic import cf_by_chromatic, cf_by_chromatic_partial, cf_total_by_chromatic
from .decompose import balanced_split, core_split
from .exact import exact_chromatic_number, exact_index
from .graph import Graph, GraphError, build_graph
from .io import read_graph, write_graph
from .lab import collision_witness, gnp
from .verify import Colouring, is_conflict_free, satisfied

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "ColourReport", "Colouring", "Graph", "GraphError", "balanced_split", "build_graph",
    "cf_by_chromatic", "cf_by_chromatic_partial", "cf_total_by_chromatic", "collision_witness",
    "colour_asymptotic", "core_split", "exact_chromatic_number", "exact_index", "four_colour_saturating", "gnp",
    "is_conflict_free", "plan", "read_graph", "satisfied", "sixteen_colour", "three_colour", "write_graph",
]
