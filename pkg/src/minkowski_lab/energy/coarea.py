"""Discrete generalized coarea identity for piecewise-constant fields.

For a field u with sorted levels s_0 < ... < s_m, the oscillation of u over
a ball splits into the level gaps it spans:

    sum_x (max - min)(u on B_r(x)) = sum_i (s_{i+1} - s_i) * #{x : x oscillates for {u > s_i}}

The left side is computed with max/min filters on u, the right side from
the binary oscillation fields of the superlevel sets. Both are kept as
integer count vectors (one entry per gap), so equality is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.energy.perimeter import oscillation_count
from minkowski_lab.grid.mask import FloatArray, ScalarField
from minkowski_lab.grid.stencil import ball_stencil
from minkowski_lab.grid.window import Window

MAX_LEVELS = 64


@dataclass(frozen=True)
class CoareaCheck:
    """Both sides of the coarea identity, as reals and as per-gap counts."""

    lhs: float
    rhs: float
    lhs_counts: tuple[int, ...]
    rhs_counts: tuple[int, ...]

    @property
    def exact(self) -> bool:
        return self.lhs_counts == self.rhs_counts


def _stencil_footprint(r: float, h: float, dim: int) -> np.ndarray:
    stencil = ball_stencil(r, h, dim)
    reach = stencil.reach
    footprint = np.zeros((2 * reach + 1,) * dim, dtype=bool)
    footprint[tuple((stencil.offsets + reach).T)] = True
    return footprint


def window_extremes(u: ScalarField, window: Window, r: float) -> tuple[FloatArray, FloatArray]:
    """Max and min of u over B_r(x) for every window cell x."""
    geom = u.geometry
    if window.geometry != geom:
        raise GeometryError("window and field live on different geometries", field="window")
    footprint = _stencil_footprint(r, geom.spacing, geom.dim)
    reach = footprint.shape[0] // 2
    lo = (-reach,) * geom.dim
    hi = tuple(s + reach for s in geom.shape)
    frame = u.lookup(geom.box_indices(lo, hi))
    crop = tuple(slice(reach, reach + s) for s in geom.shape)
    top = ndimage.maximum_filter(frame, footprint=footprint, mode="nearest")[crop]
    bottom = ndimage.minimum_filter(frame, footprint=footprint, mode="nearest")[crop]
    return top[window.cells], bottom[window.cells]


def oscillation_integral(u: ScalarField, window: Window, r: float) -> float:
    """Integral over the window of osc_{B_r(x)} u."""
    top, bottom = window_extremes(u, window, r)
    return float(u.geometry.cell_volume * (top - bottom).sum())


def coarea_check(u: ScalarField, window: Window, r: float) -> CoareaCheck:
    """Evaluate both sides of the coarea identity on a window.

    Args:
        u: Piecewise-constant field (at most 64 distinct levels, exterior included)
        window: Window on u's geometry
        r: Radius, > 0

    Returns:
        CoareaCheck; ``exact`` tells whether the count vectors agree

    Raises:
        GeometryError: If u has more than 64 levels or geometries differ
    """
    geom = u.geometry
    levels = u.levels()
    if levels.size > MAX_LEVELS:
        raise GeometryError(
            f"field has {levels.size} distinct levels, at most {MAX_LEVELS} supported",
            field="u",
        )
    gaps = np.diff(levels)
    cell = geom.cell_volume

    top, bottom = window_extremes(u, window, r)
    rank_top = np.searchsorted(levels, top)
    rank_bottom = np.searchsorted(levels, bottom)

    lhs_counts = tuple(
        int(np.count_nonzero((rank_bottom <= i) & (rank_top > i))) for i in range(gaps.size)
    )
    rhs_counts = tuple(
        oscillation_count(u.superlevel(float(levels[i])), window, r) for i in range(gaps.size)
    )
    lhs = float(cell * np.dot(gaps, np.asarray(lhs_counts, dtype=np.float64)))
    rhs = float(cell * np.dot(gaps, np.asarray(rhs_counts, dtype=np.float64)))
    return CoareaCheck(lhs=lhs, rhs=rhs, lhs_counts=lhs_counts, rhs_counts=rhs_counts)
