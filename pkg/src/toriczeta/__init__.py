"""Topological zeta functions of rings and modules via toric data."""

from .algebra_io import AlgebraInput, build_problem, load_document, parse_document
from .engine import RunConfig, RunOutcome, stage1, topological_zeta_function
from .euler import EulerCache, EulerFailure, euler_characteristic
from .laurent import LaurentPolynomial
from .polyhedra.cones import HalfOpenCone
from .toric import ReduceFailure, ToricDatum
from .topeval import RationalFunction1V

__version__ = "0.1.0"

__all__ = [
    "AlgebraInput", "EulerCache", "EulerFailure", "HalfOpenCone", "LaurentPolynomial", "RationalFunction1V",
    "ReduceFailure", "RunConfig", "RunOutcome", "ToricDatum", "build_problem", "euler_characteristic",
    "load_document", "parse_document", "stage1", "topological_zeta_function",
]
