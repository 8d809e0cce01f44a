"""Exact combinatorial toolkit for closed orientable graph manifolds."""

from .bound import (
    BoundReport,
    CanonicalSubmanifold,
    degree_bound_report,
    enumerate_canonical_submanifolds,
    hat_submanifold,
    make_canonical,
)
from .coverings import (
    CheckReport,
    Classification,
    CoveringDescriptor,
    check_covering,
    classify,
    genus_cover,
    identity_covering,
    property_i_normalize,
    separate_self_edges_cover,
)
from .invariants import (
    ClosedSeifert,
    Slope,
    abs_euler,
    abs_sv,
    canonical_filling_slopes,
    euler_number_filled,
    hat_piece,
    sv_closed,
)
from .io import ParseError, export_dot, parse, serialize
from .model import (
    Edge,
    Endpoint,
    ExceptionalFiber,
    GluingMatrix,
    GraphManifold,
    GraphManifoldError,
    HypothesisError,
    SeifertPiece,
    ValidationError,
    Violation,
    dual_graph,
    recoordinate_piece,
    validate,
)
from .witness import (
    MapDescriptor,
    WitnessCertificate,
    project_to_psl,
    rotation_cover,
    sv_witness,
    verify_certificate,
    vertical_pinch,
)

__version__ = "0.1.0"

__all__ = [
    "abs_euler",
    "abs_sv",
    "BoundReport",
    "canonical_filling_slopes",
    "CanonicalSubmanifold",
    "check_covering",
    "CheckReport",
    "Classification",
    "classify",
    "ClosedSeifert",
    "CoveringDescriptor",
    "degree_bound_report",
    "dual_graph",
    "Edge",
    "Endpoint",
    "enumerate_canonical_submanifolds",
    "euler_number_filled",
    "ExceptionalFiber",
    "export_dot",
    "genus_cover",
    "GluingMatrix",
    "GraphManifold",
    "GraphManifoldError",
    "hat_piece",
    "hat_submanifold",
    "HypothesisError",
    "identity_covering",
    "make_canonical",
    "MapDescriptor",
    "parse",
    "ParseError",
    "project_to_psl",
    "property_i_normalize",
    "recoordinate_piece",
    "rotation_cover",
    "SeifertPiece",
    "separate_self_edges_cover",
    "serialize",
    "Slope",
    "sv_closed",
    "sv_witness",
    "validate",
    "ValidationError",
    "verify_certificate",
    "vertical_pinch",
    "Violation",
    "WitnessCertificate",
]
