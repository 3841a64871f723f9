"""Lattice geometry and exterior extension rules.

A GridGeometry describes the stored window of cells: shape, uniform spacing
h, origin, and which axes wrap. A periodic axis may wrap with a shear, that
is, crossing it shifts later axes by a fixed integer offset. This is how a
strip over a rational direction is stored as a quotient grid.

ExtensionRule says what a mask looks like outside the stored window, so
every membership query is total.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from pydantic import Field, ValidationInfo, field_validator
from pydantic.dataclasses import dataclass

IndexArray = NDArray[np.int64]


@dataclass(frozen=True)
class GridGeometry:
    """Uniform lattice of cells, optionally periodic (and sheared) per axis.

    Cell k along axis i has center origin[i] + (k + 1/2) * spacing. Empty
    ``origin`` and ``periodic_axes`` default to zeros and all-False.
    ``shear[i][j]`` (only j > i, only periodic i) is the offset applied to
    axis j each time an index wraps once across axis i.
    """

    dim: int
    shape: tuple[int, ...]
    spacing: float
    origin: tuple[float, ...] = Field(default=(), validate_default=True)
    periodic_axes: tuple[bool, ...] = Field(default=(), validate_default=True)
    shear: tuple[tuple[int, ...], ...] = Field(default=(), validate_default=True)

    @field_validator("dim")
    @classmethod
    def validate_dim(cls, v: int) -> int:
        """Only dimensions 1, 2 and 3 are supported."""
        if v not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {v}")
        return v

    @field_validator("shape")
    @classmethod
    def validate_shape(cls, v: tuple[int, ...], info: ValidationInfo) -> tuple[int, ...]:
        """Every axis holds at least one cell and the length matches dim."""
        if len(v) != info.data.get("dim"):
            raise ValueError(f"shape {v} does not match dim {info.data.get('dim')}")
        if any(s < 1 for s in v):
            raise ValueError(f"shape entries must be >= 1, got {v}")
        return v

    @field_validator("spacing")
    @classmethod
    def validate_spacing(cls, v: float) -> float:
        """Spacing must be positive and finite."""
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"spacing must be > 0, got {v}")
        return v

    @field_validator("origin")
    @classmethod
    def default_origin(cls, v: tuple[float, ...], info: ValidationInfo) -> tuple[float, ...]:
        """Fill a zero origin when omitted."""
        dim = info.data.get("dim", 0)
        if not v:
            return (0.0,) * dim
        if len(v) != dim:
            raise ValueError(f"origin {v} does not match dim {dim}")
        return v

    @field_validator("periodic_axes")
    @classmethod
    def default_periodic(cls, v: tuple[bool, ...], info: ValidationInfo) -> tuple[bool, ...]:
        """Fill all-False periodicity when omitted."""
        dim = info.data.get("dim", 0)
        if not v:
            return (False,) * dim
        if len(v) != dim:
            raise ValueError(f"periodic_axes {v} does not match dim {dim}")
        return v

    @field_validator("shear")
    @classmethod
    def validate_shear(
        cls, v: tuple[tuple[int, ...], ...], info: ValidationInfo
    ) -> tuple[tuple[int, ...], ...]:
        """Shear rows are upper-triangular and only present on periodic axes."""
        dim = info.data.get("dim", 0)
        periodic = info.data.get("periodic_axes", (False,) * dim)
        if not v:
            return tuple((0,) * dim for _ in range(dim))
        if len(v) != dim or any(len(row) != dim for row in v):
            raise ValueError(f"shear must be a {dim}x{dim} integer table")
        for i, row in enumerate(v):
            if any(row[j] != 0 for j in range(i + 1)):
                raise ValueError(f"shear row {i} must vanish on axes <= {i}")
            if any(row) and not periodic[i]:
                raise ValueError(f"shear row {i} set on a non-periodic axis")
        return v

    @property
    def cell_count(self) -> int:
        """Number of stored cells."""
        return math.prod(self.shape)

    @property
    def cell_volume(self) -> float:
        """Volume h^n of one cell."""
        return self.spacing**self.dim

    @property
    def is_sheared(self) -> bool:
        """True when any periodic axis wraps with an offset."""
        return any(any(row) for row in self.shear)

    @property
    def has_periodic_axis(self) -> bool:
        return any(self.periodic_axes)

    def period_vectors(self) -> list[tuple[int, ...]]:
        """Integer cell translations that act as the identity on this grid."""
        vectors = []
        for i in range(self.dim):
            if self.periodic_axes[i]:
                vec = list(self.shear[i])
                vec[i] = self.shape[i]
                vectors.append(tuple(vec))
        return vectors

    def reduce(self, indices: IndexArray) -> IndexArray:
        """Map indices to their representatives along periodic axes.

        Args:
            indices: Integer array with trailing axis of length dim

        Returns:
            New array; periodic coordinates lie in [0, shape), non-periodic
            coordinates may still be out of range.
        """
        out = np.array(indices, dtype=np.int64, copy=True)
        for i in range(self.dim):
            if not self.periodic_axes[i]:
                continue
            wraps = np.floor_divide(out[..., i], self.shape[i])
            out[..., i] -= wraps * self.shape[i]
            for j in range(i + 1, self.dim):
                if self.shear[i][j]:
                    out[..., j] -= wraps * self.shear[i][j]
        return out

    def in_window(self, indices: IndexArray) -> NDArray[np.bool_]:
        """Whether each index lies inside the stored window."""
        idx = np.asarray(indices)
        inside = np.ones(idx.shape[:-1], dtype=bool)
        for i, size in enumerate(self.shape):
            inside &= (idx[..., i] >= 0) & (idx[..., i] < size)
        return inside

    def centers(self, indices: IndexArray) -> NDArray[np.float64]:
        """Cell centers (length units) for integer indices."""
        idx = np.asarray(indices, dtype=np.float64)
        return np.asarray(self.origin) + (idx + 0.5) * self.spacing

    def index_grid(self) -> IndexArray:
        """All stored indices as an array of shape (*shape, dim)."""
        grids = np.indices(self.shape, dtype=np.int64)
        return np.moveaxis(grids, 0, -1)

    def center_grid(self) -> NDArray[np.float64]:
        """Centers of all stored cells, shape (*shape, dim)."""
        return self.centers(self.index_grid())

    def box_indices(self, lo: tuple[int, ...], hi: tuple[int, ...]) -> IndexArray:
        """Indices of the half-open index box [lo, hi), shape (*extent, dim)."""
        axes = [np.arange(a, b, dtype=np.int64) for a, b in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    @classmethod
    def box(
        cls,
        lo: tuple[float, ...],
        hi: tuple[float, ...],
        spacing: float,
        periodic_axes: tuple[bool, ...] = (),
    ) -> GridGeometry:
        """Geometry covering the box [lo, hi] with cells of side ``spacing``.

        The cell count per axis is rounded to the nearest integer, so
        integer multiples of ``spacing`` are reproduced exactly.
        """
        shape = tuple(max(1, round((b - a) / spacing)) for a, b in zip(lo, hi))
        return cls(
            dim=len(lo),
            shape=shape,
            spacing=spacing,
            origin=tuple(float(a) for a in lo),
            periodic_axes=periodic_axes,
        )


class ExtensionVariant(str, Enum):
    """How a mask continues outside the stored window."""

    CONSTANT_INSIDE = "constant_inside"
    CONSTANT_OUTSIDE = "constant_outside"
    HALF_SPACE = "half_space"
    PERIODIC = "periodic"
    MIRROR = "mirror"


@dataclass(frozen=True)
class ExtensionRule:
    """Exterior membership rule.

    ``half_space`` sets exterior cells whose center x satisfies
    normal . x <= offset. ``negate`` flips the rule, so the complement of
    any mask is again total.
    """

    variant: ExtensionVariant
    normal: tuple[int, ...] | None = Field(default=None, validate_default=True)
    offset: float = 0.0
    negate: bool = False

    @field_validator("normal")
    @classmethod
    def validate_normal(
        cls, v: tuple[int, ...] | None, info: ValidationInfo
    ) -> tuple[int, ...] | None:
        """Half-space rules need a nonzero integer normal."""
        if info.data.get("variant") == ExtensionVariant.HALF_SPACE and (
            v is None or not any(v)
        ):
            raise ValueError("half_space extension requires a nonzero integer normal")
        return v

    @classmethod
    def constant_inside(cls) -> ExtensionRule:
        return cls(variant=ExtensionVariant.CONSTANT_INSIDE)

    @classmethod
    def constant_outside(cls) -> ExtensionRule:
        return cls(variant=ExtensionVariant.CONSTANT_OUTSIDE)

    @classmethod
    def half_space(cls, normal: tuple[int, ...], offset: float = 0.0) -> ExtensionRule:
        return cls(variant=ExtensionVariant.HALF_SPACE, normal=tuple(normal), offset=offset)

    @classmethod
    def periodic(cls) -> ExtensionRule:
        return cls(variant=ExtensionVariant.PERIODIC)

    @classmethod
    def mirror(cls) -> ExtensionRule:
        return cls(variant=ExtensionVariant.MIRROR)

    def complement(self) -> ExtensionRule:
        """Rule describing the exterior of the complementary set."""
        return ExtensionRule(
            variant=self.variant,
            normal=self.normal,
            offset=self.offset,
            negate=not self.negate,
        )

    def is_constant(self) -> bool | None:
        """The constant exterior value, or None when it varies."""
        if self.variant == ExtensionVariant.CONSTANT_INSIDE:
            return not self.negate
        if self.variant == ExtensionVariant.CONSTANT_OUTSIDE:
            return self.negate
        return None
