"""Cube-hull approximation of a set by a union of lattice-aligned cubes.

The window is cut into cubes of side r / (4 sqrt(n)), rounded up to whole
cells, and every cube that meets the set is kept. The hull has a classical
(face-count) perimeter that is controlled by Per_r of the set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from minkowski_lab.domain.errors import CubeTooSmallError
from minkowski_lab.grid.geometry import ExtensionRule
from minkowski_lab.grid.mask import BinaryMask, BoolArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CubeHull:
    """Hull mask plus the two quantities the approximation controls."""

    hull: BinaryMask
    side_cells: int
    face_perimeter: float
    symmetric_difference: float


def face_perimeter(bits: BoolArray, spacing: float) -> float:
    """Number of interior cell faces separating set and unset cells, times h^(n-1)."""
    faces = 0
    for axis in range(bits.ndim):
        faces += int(np.count_nonzero(np.diff(bits.astype(np.int8), axis=axis)))
    return faces * spacing ** (bits.ndim - 1)


def cube_side_cells(r: float, spacing: float, dim: int) -> int:
    """Cube side in cells: r / (4 sqrt(n)) rounded up.

    Raises:
        CubeTooSmallError: If r <= 4 sqrt(n) h
    """
    if r <= 4 * math.sqrt(dim) * spacing:
        raise CubeTooSmallError(r, spacing, dim)
    return math.ceil(r / (4 * math.sqrt(dim)) / spacing - 1e-9)


def cube_hull(mask: BinaryMask, r: float) -> CubeHull:
    """Union of the partition cubes that meet the set.

    Args:
        mask: Input set (stored window only)
        r: Radius that fixes the cube side

    Returns:
        CubeHull with the hull, its face perimeter and |hull delta E|

    Raises:
        CubeTooSmallError: If cubes would be smaller than one cell
    """
    geom = mask.geometry
    side = cube_side_cells(r, geom.spacing, geom.dim)

    blocks = tuple(math.ceil(s / side) for s in geom.shape)
    padded = np.zeros(tuple(b * side for b in blocks), dtype=bool)
    padded[tuple(slice(0, s) for s in geom.shape)] = mask.bits

    split_shape: list[int] = []
    for b in blocks:
        split_shape.extend((b, side))
    occupied = padded.reshape(split_shape).any(axis=tuple(range(1, 2 * geom.dim, 2)))

    hull_bits = occupied
    for axis in range(geom.dim):
        hull_bits = np.repeat(hull_bits, side, axis=axis)
    hull_bits = hull_bits[tuple(slice(0, s) for s in geom.shape)]

    hull = BinaryMask(geom, hull_bits, ExtensionRule.constant_outside())
    sym_diff = int(np.count_nonzero(hull_bits ^ mask.bits)) * geom.cell_volume
    perimeter = face_perimeter(hull_bits, geom.spacing)
    logger.debug(
        "Cube hull built",
        extra={"side_cells": side, "cubes": int(occupied.sum()), "perimeter": perimeter},
    )
    return CubeHull(hull, side, perimeter, sym_diff)
