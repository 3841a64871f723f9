"""Shape specifications and rasterization onto a lattice.

A cell is set iff its center satisfies the shape predicate. Each shape
also proposes a natural exterior rule, used unless the caller passes one.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np
from pydantic import field_validator
from pydantic.dataclasses import dataclass

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, BoolArray, FloatArray

# Absolute slack for center-on-boundary ties, in length units.
_TIE = 1e-12


class ShapeSpec(ABC):
    """Abstract base for rasterizable shapes."""

    @abstractmethod
    def contains(self, centers: FloatArray) -> BoolArray:
        """Predicate on cell centers of shape (..., dim)."""
        ...

    def default_extension(self) -> ExtensionRule:
        """Exterior rule matching the shape outside the window."""
        return ExtensionRule.constant_outside()


def _distance(centers: FloatArray, center: tuple[float, ...]) -> FloatArray:
    return np.sqrt(((centers - np.asarray(center)) ** 2).sum(axis=-1))


@dataclass(frozen=True)
class BallShape(ShapeSpec):
    """Closed ball B_R(center)."""

    center: tuple[float, ...]
    radius: float

    @field_validator("radius")
    @classmethod
    def validate_radius(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f"ball radius must be >= 0, got {v}")
        return v

    def contains(self, centers: FloatArray) -> BoolArray:
        if self.radius == 0:
            return np.zeros(centers.shape[:-1], dtype=bool)
        return _distance(centers, self.center) <= self.radius + _TIE


@dataclass(frozen=True)
class AnnulusShape(ShapeSpec):
    """B_outer(center) minus B_inner(center), both closed."""

    center: tuple[float, ...]
    inner: float
    outer: float

    @field_validator("outer")
    @classmethod
    def validate_radii(cls, v: float) -> float:
        if v < 0:
            raise ValueError(f"annulus radius must be >= 0, got {v}")
        return v

    def contains(self, centers: FloatArray) -> BoolArray:
        if self.inner < 0 or self.inner > self.outer:
            raise GeometryError(
                f"annulus needs 0 <= inner <= outer, got {self.inner}, {self.outer}",
                field="inner",
            )
        dist = _distance(centers, self.center)
        return (dist > self.inner + _TIE) & (dist <= self.outer + _TIE)


@dataclass(frozen=True)
class HalfSpaceShape(ShapeSpec):
    """{x : normal . x <= offset} for a nonzero integer normal."""

    normal: tuple[int, ...]
    offset: float = 0.0

    @field_validator("normal")
    @classmethod
    def validate_normal(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not any(v):
            raise ValueError("half-space normal must be nonzero")
        return v

    def contains(self, centers: FloatArray) -> BoolArray:
        return centers @ np.asarray(self.normal, dtype=np.float64) <= self.offset + _TIE

    def default_extension(self) -> ExtensionRule:
        return ExtensionRule.half_space(self.normal, self.offset)


@dataclass(frozen=True)
class StripesShape(ShapeSpec):
    """Slabs along ``axis``: set where frac((x - phase) / period) < duty."""

    period: float
    duty: float = 0.5
    axis: int = 0
    phase: float = 0.0

    @field_validator("period")
    @classmethod
    def validate_period(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"stripe period must be > 0, got {v}")
        return v

    @field_validator("duty")
    @classmethod
    def validate_duty(cls, v: float) -> float:
        if not 0 <= v <= 1:
            raise ValueError(f"stripe duty must lie in [0, 1], got {v}")
        return v

    def contains(self, centers: FloatArray) -> BoolArray:
        phase = np.mod((centers[..., self.axis] - self.phase) / self.period, 1.0)
        return phase < self.duty

    def default_extension(self) -> ExtensionRule:
        return ExtensionRule.periodic()


@dataclass(frozen=True)
class EllipseShape(ShapeSpec):
    """Closed axis-aligned ellipsoid with the given semi-axes."""

    center: tuple[float, ...]
    semi_axes: tuple[float, ...]

    @field_validator("semi_axes")
    @classmethod
    def validate_axes(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(a <= 0 for a in v):
            raise ValueError(f"semi-axes must be > 0, got {v}")
        return v

    def contains(self, centers: FloatArray) -> BoolArray:
        scaled = (centers - np.asarray(self.center)) / np.asarray(self.semi_axes)
        return (scaled**2).sum(axis=-1) <= 1.0 + _TIE


@dataclass(frozen=True)
class BoxShape(ShapeSpec):
    """Closed axis-aligned box [lo, hi]."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def contains(self, centers: FloatArray) -> BoolArray:
        lo = np.asarray(self.lo) - _TIE
        hi = np.asarray(self.hi) + _TIE
        return np.all((centers >= lo) & (centers <= hi), axis=-1)


@dataclass(frozen=True)
class ExplicitShape(ShapeSpec):
    """Row-major list of cell bits; only meaningful on a matching geometry."""

    bits: tuple[bool, ...]

    def contains(self, centers: FloatArray) -> BoolArray:
        shape = centers.shape[:-1]
        if len(self.bits) != int(np.prod(shape)):
            raise GeometryError(
                f"explicit shape has {len(self.bits)} bits for {int(np.prod(shape))} cells",
                field="bits",
            )
        return np.asarray(self.bits, dtype=bool).reshape(shape)


def rasterize(
    shape: ShapeSpec,
    geometry: GridGeometry,
    extension: ExtensionRule | None = None,
) -> BinaryMask:
    """Rasterize a shape: a cell is set iff its center satisfies the shape.

    Args:
        shape: Shape specification
        geometry: Target lattice
        extension: Exterior rule; defaults to the shape's own

    Returns:
        Deterministic BinaryMask

    Raises:
        GeometryError: If the shape is degenerate for this geometry
    """
    centers = geometry.center_grid()
    if centers.shape[-1] != _shape_dim(shape, geometry.dim):
        raise GeometryError(
            f"shape dimension does not match geometry dim {geometry.dim}", field="shape"
        )
    bits = shape.contains(centers)
    return BinaryMask(geometry, bits, extension or shape.default_extension())


def _shape_dim(shape: ShapeSpec, default: int) -> int:
    for attr in ("center", "normal", "lo", "semi_axes"):
        value = getattr(shape, attr, None)
        if value is not None:
            return len(value)
    return default
