"""Planelike minimizers in periodic media for rational directions."""

from minkowski_lab.planelike.birkhoff import (
    birkhoff_violations,
    check_birkhoff,
    downward_shifts,
    generating_shifts,
)
from minkowski_lab.planelike.census import ColorCensus, CubeColor, classify_cubes, cube_counts
from minkowski_lab.planelike.construct import (
    PlanelikeResult,
    StabilityCheck,
    construct_planelike,
    m_stability,
    periodicity_holds,
    sandwich_holds,
    transition_width,
)
from minkowski_lab.planelike.direction import RationalDirection, parse_omega, rational_basis
from minkowski_lab.planelike.strip import (
    PeriodicForcing,
    StripSpec,
    build_strip,
    forcing_template,
    lattice_offset,
    periodic_field,
    strip_geometry,
    unfold,
)

__all__ = [
    "ColorCensus",
    "CubeColor",
    "PeriodicForcing",
    "PlanelikeResult",
    "RationalDirection",
    "StabilityCheck",
    "StripSpec",
    "birkhoff_violations",
    "build_strip",
    "check_birkhoff",
    "classify_cubes",
    "construct_planelike",
    "cube_counts",
    "downward_shifts",
    "forcing_template",
    "generating_shifts",
    "lattice_offset",
    "m_stability",
    "parse_omega",
    "periodic_field",
    "periodicity_holds",
    "rational_basis",
    "sandwich_holds",
    "strip_geometry",
    "transition_width",
    "unfold",
]
