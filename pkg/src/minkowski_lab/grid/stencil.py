"""Closed Euclidean ball stencils on the lattice."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from minkowski_lab.domain.errors import GeometryError, StencilTooLargeError

DEFAULT_STENCIL_CAP = 256.0

# Relative slack when comparing |k|^2 h^2 against r^2.
_RADIUS_TOLERANCE = 1e-9


def lattice_radius_sq(r: float, h: float) -> int:
    """Largest integer m with m * h^2 <= r^2 (closed ball, ties included)."""
    if r < 0:
        raise GeometryError(f"radius must be >= 0, got {r}", field="r")
    ratio = (r / h) ** 2
    return math.floor(ratio * (1 + _RADIUS_TOLERANCE) + _RADIUS_TOLERANCE)


@dataclass(frozen=True)
class BallStencil:
    """Integer offsets k with |k| * h <= r.

    Offsets are sorted lexicographically, contain the zero offset and are
    symmetric under negation.
    """

    radius: float
    spacing: float
    dim: int
    radius_sq_cells: int
    offsets: NDArray[np.int64] = field(repr=False)

    @property
    def cardinality(self) -> int:
        return int(self.offsets.shape[0])

    @property
    def reach(self) -> int:
        """Largest absolute coordinate of any offset."""
        return math.isqrt(self.radius_sq_cells)

    def rows(self) -> list[tuple[tuple[int, ...], int]]:
        """Decompose the stencil into lines along the last axis.

        Returns:
            (prefix, half_width) pairs: offsets (*prefix, t) for |t| <= half_width
        """
        rows: dict[tuple[int, ...], int] = {}
        for k in self.offsets:
            prefix = tuple(int(c) for c in k[:-1])
            rows[prefix] = max(rows.get(prefix, 0), abs(int(k[-1])))
        return sorted(rows.items())


@lru_cache(maxsize=64)
def _offsets(radius_sq: int, dim: int) -> NDArray[np.int64]:
    reach = math.isqrt(radius_sq)
    axes = [np.arange(-reach, reach + 1, dtype=np.int64)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    keep = (grid**2).sum(axis=1) <= radius_sq
    out = np.ascontiguousarray(grid[keep])
    out.setflags(write=False)
    return out


def ball_stencil(
    r: float,
    h: float,
    dim: int,
    cap: float = DEFAULT_STENCIL_CAP,
) -> BallStencil:
    """Build the closed-ball stencil of radius r at spacing h.

    Args:
        r: Ball radius (length units), > 0
        h: Lattice spacing, > 0
        dim: Dimension in {1, 2, 3}
        cap: Largest accepted r/h

    Returns:
        BallStencil with all integer offsets k such that |k| * h <= r

    Raises:
        GeometryError: If r, h or dim are out of range
        StencilTooLargeError: If r/h exceeds cap
    """
    if r <= 0:
        raise GeometryError(f"stencil radius must be > 0, got {r}", field="r")
    if h <= 0:
        raise GeometryError(f"spacing must be > 0, got {h}", field="h")
    if dim not in (1, 2, 3):
        raise GeometryError(f"dim must be 1, 2 or 3, got {dim}", field="dim")
    if r / h > cap:
        raise StencilTooLargeError(r / h, cap)

    radius_sq = lattice_radius_sq(r, h)
    return BallStencil(
        radius=r,
        spacing=h,
        dim=dim,
        radius_sq_cells=radius_sq,
        offsets=_offsets(radius_sq, dim),
    )
