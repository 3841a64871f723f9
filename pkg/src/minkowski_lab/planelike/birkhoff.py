"""Ordered inclusion of a set under signed lattice translations."""

from __future__ import annotations

import numpy as np

from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.planelike.direction import RationalDirection


def generating_shifts(direction: RationalDirection) -> list[tuple[int, ...]]:
    """K_j, -K_j and the signed unit vectors, deduplicated, in lattice units."""
    n = direction.dim
    shifts: list[tuple[int, ...]] = []
    for k in direction.period_basis:
        shifts.extend([tuple(k), tuple(-c for c in k)])
    for i in range(n):
        unit = tuple(int(i == j) for j in range(n))
        shifts.extend([unit, tuple(-c for c in unit)])
    return list(dict.fromkeys(shifts))


def downward_shifts(direction: RationalDirection) -> list[tuple[int, ...]]:
    """Generating shifts k with omega . k <= 0."""
    omega = direction.omega_int
    return [k for k in generating_shifts(direction) if sum(a * b for a, b in zip(k, omega)) <= 0]


def birkhoff_violations(
    mask: BinaryMask, direction: RationalDirection
) -> dict[tuple[int, ...], int]:
    """Cells breaking E + k subset E, per downward generating shift k.

    Shifts with omega . k >= 0 need no separate pass: E + k superset E is
    the same statement as E - k subset E.
    """
    geom = mask.geometry
    cells_per_unit = round(1 / geom.spacing)
    members = np.argwhere(mask.bits).astype(np.int64)
    violations: dict[tuple[int, ...], int] = {}
    for k in downward_shifts(direction):
        moved = members + cells_per_unit * np.asarray(k, dtype=np.int64)
        missing = int(np.count_nonzero(~mask.lookup(moved)))
        if missing:
            violations[k] = missing
    return violations


def check_birkhoff(mask: BinaryMask, direction: RationalDirection) -> bool:
    """True iff E + k is contained in E for every downward generating shift k."""
    return not birkhoff_violations(mask, direction)
