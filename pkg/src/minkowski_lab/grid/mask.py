"""Binary masks and scalar fields over a GridGeometry.

Both types are immutable: their arrays are flagged read-only and every
operation returns a new object. Membership and value queries are total,
answered from the stored window, the geometry's periodic identifications,
or the exterior rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.grid.geometry import (
    ExtensionRule,
    ExtensionVariant,
    GridGeometry,
    IndexArray,
)

BoolArray = NDArray[np.bool_]
FloatArray = NDArray[np.float64]


def frozen_array(array: NDArray[np.generic]) -> NDArray[np.generic]:
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out


def _reflect(idx: IndexArray, size: int) -> IndexArray:
    """Symmetric reflection: -1 -> 0, size -> size - 1."""
    period = 2 * size
    folded = np.mod(idx, period)
    return np.where(folded < size, folded, period - 1 - folded)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """A set E as one bit per stored cell plus an exterior rule."""

    geometry: GridGeometry
    bits: BoolArray
    extension: ExtensionRule

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != self.geometry.shape:
            raise GeometryError(
                f"bits shape {bits.shape} does not match geometry {self.geometry.shape}",
                field="bits",
            )
        object.__setattr__(self, "bits", frozen_array(bits))

    @classmethod
    def empty(cls, geometry: GridGeometry) -> BinaryMask:
        return cls(geometry, np.zeros(geometry.shape, dtype=bool), ExtensionRule.constant_outside())

    @classmethod
    def full(cls, geometry: GridGeometry) -> BinaryMask:
        return cls(geometry, np.ones(geometry.shape, dtype=bool), ExtensionRule.constant_inside())

    @property
    def count(self) -> int:
        """Number of set stored cells."""
        return int(np.count_nonzero(self.bits))

    def with_bits(self, bits: BoolArray) -> BinaryMask:
        """Same geometry and exterior, new stored bits."""
        return BinaryMask(self.geometry, bits, self.extension)

    def lookup(self, indices: IndexArray) -> BoolArray:
        """Membership of arbitrary integer cell indices.

        Args:
            indices: Integer array with trailing axis of length dim

        Returns:
            Boolean array of shape indices.shape[:-1]
        """
        geom = self.geometry
        idx = geom.reduce(np.asarray(indices, dtype=np.int64))
        inside = geom.in_window(idx)
        out = np.zeros(idx.shape[:-1], dtype=bool)
        if inside.any():
            out[inside] = self.bits[tuple(idx[inside].T)]
        outside = ~inside
        if outside.any():
            out[outside] = self._exterior(idx[outside])
        return out

    def _exterior(self, idx: IndexArray) -> BoolArray:
        rule = self.extension
        geom = self.geometry
        variant = rule.variant
        if variant == ExtensionVariant.CONSTANT_INSIDE:
            values = np.ones(idx.shape[0], dtype=bool)
        elif variant == ExtensionVariant.CONSTANT_OUTSIDE:
            values = np.zeros(idx.shape[0], dtype=bool)
        elif variant == ExtensionVariant.HALF_SPACE:
            assert rule.normal is not None
            centers = geom.centers(idx)
            values = centers @ np.asarray(rule.normal, dtype=np.float64) <= rule.offset
        elif variant == ExtensionVariant.PERIODIC:
            wrapped = np.mod(idx, np.asarray(geom.shape))
            values = self.bits[tuple(wrapped.T)]
        else:
            reflected = np.stack(
                [_reflect(idx[:, i], geom.shape[i]) for i in range(geom.dim)], axis=-1
            )
            values = self.bits[tuple(reflected.T)]
        return values ^ rule.negate

    def materialize(self, lo: tuple[int, ...], hi: tuple[int, ...]) -> BoolArray:
        """Membership over the index box [lo, hi), including exterior cells."""
        return self.lookup(self.geometry.box_indices(lo, hi))

    def padded(self, pad: int | tuple[int, ...]) -> BoolArray:
        """Stored window grown by ``pad`` cells on every side."""
        pads = (pad,) * self.geometry.dim if isinstance(pad, int) else pad
        lo = tuple(-p for p in pads)
        hi = tuple(s + p for s, p in zip(self.geometry.shape, pads))
        return self.materialize(lo, hi)

    def complement(self) -> BinaryMask:
        return BinaryMask(self.geometry, ~self.bits, self.extension.complement())

    def _check_compatible(self, other: BinaryMask) -> None:
        if self.geometry != other.geometry:
            raise GeometryError("masks live on different geometries", field="geometry")
        if self.extension != other.extension:
            raise GeometryError("masks have different exterior rules", field="extension")

    def intersection(self, other: BinaryMask) -> BinaryMask:
        """Cellwise intersection; both masks must share geometry and exterior."""
        self._check_compatible(other)
        return self.with_bits(self.bits & other.bits)

    def union(self, other: BinaryMask) -> BinaryMask:
        """Cellwise union; both masks must share geometry and exterior."""
        self._check_compatible(other)
        return self.with_bits(self.bits | other.bits)

    def issubset(self, other: BinaryMask) -> bool:
        """Stored-window inclusion."""
        return bool(np.all(~self.bits | other.bits))

    def shift(self, offset: tuple[int, ...]) -> BinaryMask:
        """Translate by an integer cell offset, reading through lookup.

        On periodic geometries this is an exact lattice translation; on
        bounded ones the vacated cells are filled from the exterior rule.
        """
        source = self.geometry.index_grid() - np.asarray(offset, dtype=np.int64)
        return self.with_bits(self.lookup(source))

    def same_as(self, other: BinaryMask) -> bool:
        """Equal geometry, exterior and stored bits."""
        return (
            self.geometry == other.geometry
            and self.extension == other.extension
            and bool(np.array_equal(self.bits, other.bits))
        )


class FieldExtension(str, Enum):
    """Exterior rule for scalar fields."""

    PERIODIC = "periodic"
    ZERO = "zero"


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One finite real value per stored cell plus an exterior rule."""

    geometry: GridGeometry
    values: FloatArray
    extension: FieldExtension = FieldExtension.ZERO

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.geometry.shape:
            raise GeometryError(
                f"values shape {values.shape} does not match geometry {self.geometry.shape}",
                field="values",
            )
        if not np.all(np.isfinite(values)):
            raise GeometryError("scalar field values must be finite", field="values")
        object.__setattr__(self, "values", frozen_array(values))

    @classmethod
    def zeros(cls, geometry: GridGeometry) -> ScalarField:
        return cls(geometry, np.zeros(geometry.shape))

    @classmethod
    def constant(cls, geometry: GridGeometry, value: float) -> ScalarField:
        return cls(geometry, np.full(geometry.shape, float(value)))

    @classmethod
    def indicator(cls, mask: BinaryMask, value: float) -> ScalarField:
        """``value`` on the set cells of ``mask``, zero elsewhere."""
        return cls(mask.geometry, np.where(mask.bits, float(value), 0.0))

    def lookup(self, indices: IndexArray) -> FloatArray:
        """Values at arbitrary integer cell indices."""
        geom = self.geometry
        idx = geom.reduce(np.asarray(indices, dtype=np.int64))
        if self.extension == FieldExtension.PERIODIC:
            idx = np.mod(idx, np.asarray(geom.shape))
            return self.values[tuple(np.moveaxis(idx, -1, 0))]
        inside = geom.in_window(idx)
        out = np.zeros(idx.shape[:-1], dtype=np.float64)
        out[inside] = self.values[tuple(idx[inside].T)]
        return out

    def levels(self) -> FloatArray:
        """Sorted distinct values, including the exterior zero when relevant."""
        values = np.unique(self.values)
        if self.extension == FieldExtension.ZERO:
            values = np.union1d(values, [0.0])
        return values

    def superlevel(self, threshold: float) -> BinaryMask:
        """The set {u > threshold} with a matching exterior rule."""
        bits = self.values > threshold
        if self.extension == FieldExtension.PERIODIC:
            rule = ExtensionRule.periodic()
        elif threshold < 0:
            rule = ExtensionRule.constant_inside()
        else:
            rule = ExtensionRule.constant_outside()
        return BinaryMask(self.geometry, bits, rule)
