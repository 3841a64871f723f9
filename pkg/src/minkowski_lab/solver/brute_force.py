"""Exhaustive enumeration oracle for small Dirichlet problems.

Shares no code with the graph encoding: oscillation is recomputed per
labeling from each window cell's stencil, with free cells packed into
integer bit masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from minkowski_lab.domain.errors import TooLargeError
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.stencil import ball_stencil
from minkowski_lab.solver.spec import DirichletSpec

DEFAULT_ORACLE_CAP = 20


@dataclass(frozen=True, eq=False)
class BruteForceResult:
    """Minimum energy and the complete argmin set.

    ``labelings`` holds each minimizer as an integer whose bit i is the
    membership of free cell i (free cells in C order).
    """

    min_scaled: int
    min_energy: float
    labelings: NDArray[np.int64]
    minimizers: list[BinaryMask] = field(repr=False)

    @property
    def bottom(self) -> int:
        """Labeling of the intersection of all minimizers."""
        return int(np.bitwise_and.reduce(self.labelings))

    @property
    def top(self) -> int:
        """Labeling of the union of all minimizers."""
        return int(np.bitwise_or.reduce(self.labelings))

    def is_lattice(self) -> bool:
        """Whether the argmin set is closed under intersection and union."""
        members = {int(v) for v in self.labelings}
        return all(a & b in members and a | b in members for a in members for b in members)


def _labels_to_bits(
    spec: DirichletSpec, free_cells: NDArray[np.int64], label: int
) -> NDArray[np.bool_]:
    bits = np.zeros(spec.geometry.cell_count, dtype=bool)
    for i, cell in enumerate(free_cells):
        bits[cell] = bool((label >> i) & 1)
    return bits.reshape(spec.geometry.shape)


def brute_force(spec: DirichletSpec, cap: int = DEFAULT_ORACLE_CAP) -> BruteForceResult:
    """Enumerate all 2^k labelings of the free cells.

    Args:
        spec: Problem with at most ``cap`` free cells
        cap: Largest enumerable free-cell count

    Returns:
        BruteForceResult with exact scaled minimum and every minimizer

    Raises:
        TooLargeError: If the spec has more than ``cap`` free cells
    """
    geom = spec.geometry
    free_cells = np.flatnonzero(np.asarray(spec.free).ravel()).astype(np.int64)
    k = int(free_cells.size)
    if k > cap:
        raise TooLargeError(k, cap, {"label": spec.label})

    node_of = np.full(geom.cell_count, -1, dtype=np.int64)
    node_of[free_cells] = np.arange(k, dtype=np.int64)

    stencil = ball_stencil(spec.r, geom.spacing, geom.dim)
    centers = np.argwhere(spec.window.cells).astype(np.int64)
    touches_in = np.zeros(centers.shape[0], dtype=bool)
    touches_out = np.zeros(centers.shape[0], dtype=bool)
    free_bits = np.zeros(centers.shape[0], dtype=np.int64)
    for offset in stencil.offsets:
        nb = geom.reduce(centers + offset)
        inside = geom.in_window(nb)
        ids = np.full(centers.shape[0], -1, dtype=np.int64)
        ids[inside] = node_of[np.ravel_multi_index(tuple(nb[inside].T), geom.shape)]
        fixed = ids < 0
        values = spec.boundary.lookup(nb)
        touches_in |= fixed & values
        touches_out |= fixed & ~values
        free_bits |= np.where(fixed, 0, np.left_shift(1, np.maximum(ids, 0)))

    labels = np.arange(1 << k, dtype=np.int64)
    osc = np.zeros(labels.size, dtype=np.int64)
    rows = np.stack([touches_in.astype(np.int64), touches_out.astype(np.int64), free_bits], axis=1)
    patterns, counts = np.unique(rows, axis=0, return_counts=True)
    for (cin, cout, m), count in zip(patterns, counts):
        has_in = bool(cin) | ((labels & m) != 0)
        has_out = bool(cout) | ((~labels & m) != 0)
        osc += int(count) * (has_in & has_out)

    q = spec.forcing_units()
    window = spec.window.cells
    constant_bulk = int(q[window & spec.boundary.bits & ~np.asarray(spec.free)].sum())
    q_free = np.where(window.ravel()[free_cells], q.ravel()[free_cells], 0)
    bulk = np.zeros(labels.size, dtype=np.int64)
    for i in range(k):
        bulk += int(q_free[i]) * ((labels >> i) & 1)

    scaled = spec.capacity_scale * osc + constant_bulk + bulk
    best = int(scaled.min())
    argmin = labels[scaled == best]
    minimizers = [spec.compose(_labels_to_bits(spec, free_cells, int(v))) for v in argmin]
    real = best * geom.cell_volume / (2 * spec.r * spec.capacity_scale)
    return BruteForceResult(
        min_scaled=best, min_energy=real, labelings=argmin, minimizers=minimizers
    )
