"""Diagrams of initial exponents and Hilbert-Samuel functions through jets.

Exact rational computations of the formal ideal of relations of a
polynomial map at a fiber and of its diagram of initial exponents.
"""
__version__ = "0.1.0"

from .errors import (
    CrossCheckError,
    DimensionError,
    DomainError,
    FormalJetsError,
    ParseError,
    TruncationError,
    ZeroSeriesError,
)
from .multiindex import (
    Diagram,
    compare_diagrams,
    compare_multiindex,
    diagram_contains,
    diagram_from_vertices,
    diagram_truncate,
    hilbert_samuel_from_diagram,
    hilbert_samuel_table,
    lemma41_witness,
)
from .series import TruncatedSeries, hironaka_divide, initial_exponent, polynomial
from .linalg import RationalMatrix, Subspace, ker_theta, kernel, rank
from .jets import FiberTuple, PolynomialMap, e_lk, jet_matrix, stacked_jet_matrix
from .ideals import (
    IdealPresentation,
    diagram_of_ideal,
    hilbert_samuel_direct,
    ideal_jet_subspace,
    membership_jet,
    standard_basis_truncated,
)
from .chevalley import (
    DiagramReport,
    LPolicy,
    alpha_membership_test,
    chevalley_estimate,
    diagram_at_point,
    formal_ideal_jet,
    nu_truncated,
)
from .strata import (
    Arc,
    diagram_along_arc,
    essential_rank_test,
    generic_diagram_estimate,
    semicontinuity_check,
    z_set_membership,
)
from .session import parse_session

__all__ = [
    "__version__",
    "CrossCheckError",
    "DimensionError",
    "DomainError",
    "FormalJetsError",
    "ParseError",
    "TruncationError",
    "ZeroSeriesError",
    "Diagram",
    "compare_diagrams",
    "compare_multiindex",
    "diagram_contains",
    "diagram_from_vertices",
    "diagram_truncate",
    "hilbert_samuel_from_diagram",
    "hilbert_samuel_table",
    "lemma41_witness",
    "TruncatedSeries",
    "hironaka_divide",
    "initial_exponent",
    "polynomial",
    "RationalMatrix",
    "Subspace",
    "ker_theta",
    "kernel",
    "rank",
    "FiberTuple",
    "PolynomialMap",
    "e_lk",
    "jet_matrix",
    "stacked_jet_matrix",
    "IdealPresentation",
    "diagram_of_ideal",
    "hilbert_samuel_direct",
    "ideal_jet_subspace",
    "membership_jet",
    "standard_basis_truncated",
    "DiagramReport",
    "LPolicy",
    "alpha_membership_test",
    "chevalley_estimate",
    "diagram_at_point",
    "formal_ideal_jet",
    "nu_truncated",
    "Arc",
    "diagram_along_arc",
    "essential_rank_test",
    "generic_diagram_estimate",
    "semicontinuity_check",
    "z_set_membership",
    "parse_session",
]
