"""Discrete Hammersley processes: longest chains, line diagrams and particle dynamics."""

from .core import (
    BoundaryData,
    CrossField,
    ModelKind,
    SeedSpec,
    TrivialRegimeError,
    alpha_star,
    optimal_boundary,
    sample_boundary,
    sample_cross_field,
)
from .dynamics import evolve, step
from .lines import build_lines, build_lines_boundary, edge_occupancy
from .subseq import longest_chain, longest_chain_boundary, optimal_path

__version__ = "0.1.0"

__all__ = [
    "BoundaryData", "CrossField", "ModelKind", "SeedSpec", "TrivialRegimeError",
    "alpha_star", "optimal_boundary", "sample_boundary", "sample_cross_field",
    "evolve", "step", "build_lines", "build_lines_boundary", "edge_occupancy",
    "longest_chain", "longest_chain_boundary", "optimal_path", "__version__",
]
