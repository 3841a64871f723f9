"""Lattice substrate: geometry, masks, stencils, shapes, measures, I/O."""

from minkowski_lab.grid.geometry import ExtensionRule, ExtensionVariant, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, FieldExtension, ScalarField
from minkowski_lab.grid.measure import volume
from minkowski_lab.grid.shapes import (
    AnnulusShape,
    BallShape,
    BoxShape,
    EllipseShape,
    ExplicitShape,
    HalfSpaceShape,
    ShapeSpec,
    StripesShape,
    rasterize,
)
from minkowski_lab.grid.stencil import BallStencil, ball_stencil
from minkowski_lab.grid.window import Window

__all__ = [
    "AnnulusShape",
    "BallShape",
    "BallStencil",
    "BinaryMask",
    "BoxShape",
    "EllipseShape",
    "ExplicitShape",
    "ExtensionRule",
    "ExtensionVariant",
    "FieldExtension",
    "GridGeometry",
    "HalfSpaceShape",
    "ScalarField",
    "ShapeSpec",
    "StripesShape",
    "Window",
    "ball_stencil",
    "rasterize",
    "volume",
]
