"""Discrepancy of K_r-tilings in dense edge-colored graphs.

Exact, desk-scale tools: colored graphs, zero-discrepancy constructions,
a tiling solver, template detection and the two-tiling boost, structural
few-color-set extraction, and brute-force verification suites.
"""

from .errors import (HypothesisError, NoTilingError, PreconditionError, SolverExhaustedError,
                     TilescopeError)
from .graph import ColoredGraph, ColorProfile, build_graph, complete_graph, discrepancy, profile
from .tilings import Tiling, enumerate_tilings, find_tiling, sample_tilings

__version__ = "0.1.0"

__all__ = ["ColoredGraph", "ColorProfile", "HypothesisError", "NoTilingError", "PreconditionError",
           "SolverExhaustedError", "TilescopeError", "Tiling", "build_graph", "complete_graph",
           "discrepancy", "enumerate_tilings", "find_tiling", "profile", "sample_tilings"]
