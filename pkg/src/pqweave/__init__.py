"""
pqweave: crossing numbers, crossing matrices and minimal motifs of doubly
periodic untwisted (p,q)-weaves.

A weave is given by N sets of parallel threads, a torus slope per set and a
crossing sequence ``(+p, -q)`` per pair of sets. From that, this package
computes the pairwise and total crossing numbers, searches minimal torus
motifs, builds and compares crossing matrices and checks entanglement.
"""

from .core import (CrossingSequence, Diagnostic, IndexOutOfRange, InvalidSpec, NotCoprime,
                   Slope, WeaveError, WeaveSpec, ZeroSlope, complement, det, module,
                   normalize_slope, validate_spec)
from .intersect import PairwiseCrossing, geometric_intersection, pairwise_crossing_number
from .solver import (NoSolutionWithinBounds, SearchBounds, SolveResult, default_bounds,
                     enumerate_solutions, solve_min, solve_next)
from .matrix import (CrossingMatrix, GcdViolation, MatrixSet, MatrixTransform, ModuleMismatch,
                     Rotation, apply_transform, complement_matrix, equivalent_sets, gen_block,
                     gen_diagonal, gen_satin, rank, validate_matrix)
from .motif import (Crossing, GeneralPositionFailure, IncompatibleMatrix, Motif,
                    NonPeriodicPattern, Strand, build_motif, extract_matrices, translate_cell,
                    validate_tiling)
from .analysis import (ATriangle, UnknownStrand, a_triangle_count, blocking_crossings,
                       find_a_triangles, is_entangled)
from .render import PaletteTooSmall, RenderOptions, render_design, render_motif_svg, render_text

__version__ = "0.1.0"

__all__ = [
    "CrossingSequence",
    "Diagnostic",
    "IndexOutOfRange",
    "InvalidSpec",
    "NotCoprime",
    "Slope",
    "WeaveError",
    "WeaveSpec",
    "ZeroSlope",
    "complement",
    "det",
    "module",
    "normalize_slope",
    "validate_spec",
    "PairwiseCrossing",
    "geometric_intersection",
    "pairwise_crossing_number",
    "NoSolutionWithinBounds",
    "SearchBounds",
    "SolveResult",
    "default_bounds",
    "enumerate_solutions",
    "solve_min",
    "solve_next",
    "CrossingMatrix",
    "GcdViolation",
    "MatrixSet",
    "MatrixTransform",
    "ModuleMismatch",
    "Rotation",
    "apply_transform",
    "complement_matrix",
    "equivalent_sets",
    "gen_block",
    "gen_diagonal",
    "gen_satin",
    "rank",
    "validate_matrix",
    "Crossing",
    "GeneralPositionFailure",
    "IncompatibleMatrix",
    "Motif",
    "NonPeriodicPattern",
    "Strand",
    "build_motif",
    "extract_matrices",
    "translate_cell",
    "validate_tiling",
    "ATriangle",
    "UnknownStrand",
    "a_triangle_count",
    "blocking_crossings",
    "find_a_triangles",
    "is_entangled",
    "PaletteTooSmall",
    "RenderOptions",
    "render_design",
    "render_motif_svg",
    "render_text",
]
