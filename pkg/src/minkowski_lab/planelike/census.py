"""Density classification of overlapping lattice cubes.

Cubes are j + [0, n]^n for integer j (lattice units), so each holds
(n s)^n cells at s = 1/h cells per unit. A cube is Black when it lies in
E, White when it misses E and Grey otherwise. Grey cubes holding at least
r^n of E are foggy black, those holding at least r^n of the complement
foggy white; cubes that are both are Multicolored, the rest almost black
or almost white.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.typing import NDArray
from pydantic import BaseModel

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.planelike.birkhoff import generating_shifts
from minkowski_lab.planelike.direction import RationalDirection
from minkowski_lab.planelike.strip import lattice_offset


class CubeColor(str, Enum):
    """Cube classes in their order along omega."""

    BLACK = "black"
    ALMOST_BLACK = "almost_black"
    MULTICOLORED = "multicolored"
    ALMOST_WHITE = "almost_white"
    WHITE = "white"


LAYER_ORDER = list(CubeColor)


class ColorCensus(BaseModel):
    """Counts and omega-extents of each cube class.

    ``extents`` maps a class to (min, max) of omega_unit . center over its
    cubes, or None when the class is empty.
    """

    cube_side: int
    threshold_cells: int
    cube_cells: int
    black: int
    white: int
    grey: int
    foggy_black: int
    foggy_white: int
    multicolored: int
    almost_black: int
    almost_white: int
    extents: dict[str, tuple[float, float] | None]
    monotone: bool

    def layers_ordered(self) -> bool:
        """Extent intervals of the five layers are ordered along omega."""
        present = [self.extents[c.value] for c in LAYER_ORDER if self.extents.get(c.value)]
        for low, high in zip(present, present[1:]):
            assert low is not None and high is not None
            if low[0] > high[0] or low[1] > high[1]:
                return False
        return True

    def identities_hold(self) -> bool:
        """Grey is the union of the foggy classes and they split as defined.

        Grey = foggy black + foggy white - multicolored, so every grey cube
        holds r^n of E or of its complement. It can fail once 2 r^n exceeds
        the cube volume.
        """
        return (
            self.multicolored + self.almost_black == self.foggy_black
            and self.multicolored + self.almost_white == self.foggy_white
            and self.foggy_black + self.foggy_white - self.multicolored == self.grey
            and self.almost_black + self.multicolored + self.almost_white == self.grey
        )


def cube_counts(
    mask: BinaryMask, side: int, lo: tuple[int, ...], hi: tuple[int, ...]
) -> NDArray[np.int64]:
    """Set-cell count of every cube j + [0, side]^n with lo <= j < hi.

    ``lo``/``hi`` are absolute lattice coordinates; membership outside the
    stored window is read through the mask's exterior.
    """
    geom = mask.geometry
    s = round(1 / geom.spacing)
    if abs(s * geom.spacing - 1) > 1e-9:
        raise GeometryError(f"1/h must be an integer, got h={geom.spacing}", field="h")
    offset = lattice_offset(geom)
    cell_lo = tuple(int(a * s - o) for a, o in zip(lo, offset))
    cell_hi = tuple(int((b + side - 1) * s - o) for b, o in zip(hi, offset))
    bits = mask.materialize(cell_lo, cell_hi).astype(np.int64)
    units = tuple(b + side - 1 - a for a, b in zip(lo, hi))
    blocked = bits.reshape([v for u in units for v in (u, s)])
    unit_counts = blocked.sum(axis=tuple(range(1, 2 * geom.dim, 2)))
    windows = sliding_window_view(unit_counts, (side,) * geom.dim)
    return windows.sum(axis=tuple(range(geom.dim, 2 * geom.dim)))


def strip_cube_range(mask: BinaryMask) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Cube origins covering one period of the stored strip."""
    geom = mask.geometry
    s = round(1 / geom.spacing)
    offset = lattice_offset(geom)
    lo = []
    hi = []
    for axis in range(geom.dim):
        if geom.periodic_axes[axis]:
            lo.append(0)
            hi.append(geom.shape[axis] // s)
        else:
            lo.append(math.floor(offset[axis] / s))
            hi.append(math.ceil((offset[axis] + geom.shape[axis]) / s))
    return tuple(lo), tuple(hi)


def _overlap(size: int, step: int) -> tuple[slice, slice]:
    """Slices pairing index j + step with j along one axis of length size."""
    if step >= 0:
        return slice(step, None), slice(None, size - step)
    return slice(None, size + step), slice(-step, None)


def _monotone(counts: NDArray[np.int64], direction: RationalDirection) -> bool:
    """E-volume never grows under a generating shift k with omega . k >= 0.

    The shifts are the K_j, their negatives and the signed unit vectors. A
    shift along the strip (omega . k = 0) is paired with its negative, so
    volumes must agree there.
    """
    omega = direction.omega_int
    for k in generating_shifts(direction):
        if sum(a * b for a, b in zip(k, omega)) < 0:
            continue
        if any(abs(step) >= size for step, size in zip(k, counts.shape)):
            continue
        pairs = [_overlap(size, step) for size, step in zip(counts.shape, k)]
        upper = counts[tuple(p[0] for p in pairs)]
        lower = counts[tuple(p[1] for p in pairs)]
        if np.any(upper > lower):
            return False
    return True


def classify_cubes(
    mask: BinaryMask,
    r: float,
    direction: RationalDirection,
    lo: tuple[int, ...] | None = None,
    hi: tuple[int, ...] | None = None,
) -> ColorCensus:
    """Classify the overlapping cubes j + [0, n]^n by their density of E.

    Args:
        mask: Set on a lattice with integer cells per unit
        r: Radius; the density threshold is r^n
        direction: Direction whose projection orders the layers
        lo: Smallest cube origin (lattice units); defaults to the strip range
        hi: One past the largest cube origin

    Returns:
        ColorCensus with counts, extents and the shift-monotonicity flag
    """
    geom = mask.geometry
    n = geom.dim
    if lo is None or hi is None:
        lo, hi = strip_cube_range(mask)
    s = round(1 / geom.spacing)
    side = n
    counts = cube_counts(mask, side, lo, hi)
    full = (side * s) ** n
    threshold = math.ceil((r * s) ** n - 1e-9)

    inside = counts
    outside = full - counts
    black = inside == full
    white = inside == 0
    grey = ~black & ~white
    foggy_black = grey & (inside >= threshold)
    foggy_white = grey & (outside >= threshold)
    multi = foggy_black & foggy_white
    classes = {
        CubeColor.BLACK: black,
        CubeColor.ALMOST_BLACK: foggy_black & ~multi,
        CubeColor.MULTICOLORED: multi,
        CubeColor.ALMOST_WHITE: foggy_white & ~multi,
        CubeColor.WHITE: white,
    }

    origins = np.stack(
        np.meshgrid(*[np.arange(a, b) for a, b in zip(lo, hi)], indexing="ij"), axis=-1
    )
    centers = origins + side / 2
    heights = direction.projection(centers.astype(np.float64))
    extents: dict[str, tuple[float, float] | None] = {}
    for color, selected in classes.items():
        if selected.any():
            extents[color.value] = (float(heights[selected].min()), float(heights[selected].max()))
        else:
            extents[color.value] = None

    return ColorCensus(
        cube_side=side,
        threshold_cells=threshold,
        cube_cells=full,
        black=int(black.sum()),
        white=int(white.sum()),
        grey=int(grey.sum()),
        foggy_black=int(foggy_black.sum()),
        foggy_white=int(foggy_white.sum()),
        multicolored=int(multi.sum()),
        almost_black=int(classes[CubeColor.ALMOST_BLACK].sum()),
        almost_white=int(classes[CubeColor.ALMOST_WHITE].sum()),
        extents=extents,
        monotone=_monotone(counts, direction),
    )
