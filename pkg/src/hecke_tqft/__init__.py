"""Surface invariants from Iwahori-Hecke algebras of finite Coxeter groups.

The polynomial P(Sigma) of a punctured or bordered surface is a state sum
over a triangulation with triangle weights tr(h_x h_y h_z).  Four
independent pipelines compute it: the state sum itself, a polygon-word
contraction, Casimir traces and the Schur-element formula.
"""

from .center import (
    CentralDecomposition,
    IrreducibleLabel,
    central_decomposition,
    closed_form_table,
    dims,
    schur_closed_form,
)
from .coxeter import CoxeterSystem, CoxeterType, build, parse_type
from .errors import HeckeError, PipelineDisagreement, UnsupportedError, ValidationError
from .hecke import HeckeAlgebra, HeckeElement, algebra
from .laurent import LaurentPoly, QView, analyze, parse_poly, to_q_view
from .surfaces import (
    CiliatedSurface,
    Triangulation,
    all_pipelines,
    analyze_invariant,
    flip,
    invariant,
    triangulation,
)

__version__ = "0.1.0"

__all__ = [
    "CentralDecomposition",
    "CiliatedSurface",
    "CoxeterSystem",
    "CoxeterType",
    "HeckeAlgebra",
    "HeckeElement",
    "HeckeError",
    "IrreducibleLabel",
    "LaurentPoly",
    "PipelineDisagreement",
    "QView",
    "Triangulation",
    "UnsupportedError",
    "ValidationError",
    "algebra",
    "all_pipelines",
    "analyze",
    "analyze_invariant",
    "build",
    "central_decomposition",
    "closed_form_table",
    "dims",
    "flip",
    "invariant",
    "parse_poly",
    "parse_type",
    "schur_closed_form",
    "to_q_view",
    "triangulation",
]
