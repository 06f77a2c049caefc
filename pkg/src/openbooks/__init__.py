"""Combinatorial open books: curves on surfaces, Dehn twists,
sobering-arc overtwistedness certificates and configuration graphs."""

from .surface import (
    IntersectionProfile,
    PathWord,
    SurfaceError,
    SurfacePresentation,
    build_surface,
    i_alg,
    i_boundary,
    i_geom,
    is_isotopic,
    minimal_position,
    normalize,
)

__all__ = [
    "IntersectionProfile", "PathWord", "SurfaceError", "SurfacePresentation",
    "build_surface", "i_alg", "i_boundary", "i_geom", "is_isotopic",
    "minimal_position", "normalize",
]
