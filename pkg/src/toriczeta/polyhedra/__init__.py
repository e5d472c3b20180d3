"""Rational cones, half-open cones, polytopes, triangulations and generating functions."""

from .cones import Cone, DimensionMismatch, EmptyConeError, HalfOpenCone, PolyhedralModel
from .genfun import GeneratingFunction, generating_function, substitute_monomial
from .lattice import smith_normal_form
from .polytopes import Polytope, normal_fan_pieces
from .triangulation import SimplicialCone, parallelepiped_points, triangulate


def model_of(C0: HalfOpenCone) -> PolyhedralModel:
    return C0.model()


def hoc_intersect(C0: HalfOpenCone, D0: HalfOpenCone) -> HalfOpenCone:
    return C0.intersect(D0)


def hoc_is_empty(C0: HalfOpenCone) -> bool:
    return C0.is_empty()


def hoc_closure(C0: HalfOpenCone) -> Cone:
    return C0.closure()


def dual_contains(C0: HalfOpenCone, alpha) -> bool:
    return C0.dual_contains(alpha)


__all__ = [
    "Cone", "DimensionMismatch", "EmptyConeError", "GeneratingFunction", "HalfOpenCone",
    "PolyhedralModel", "Polytope", "SimplicialCone", "dual_contains", "generating_function",
    "hoc_closure", "hoc_intersect", "hoc_is_empty", "model_of", "normal_fan_pieces",
    "parallelepiped_points", "smith_normal_form", "substitute_monomial", "triangulate",
]
