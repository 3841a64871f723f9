"""s-t graph encoding of the discrete Dirichlet energy.

Convention: a free cell belongs to E iff its node ends on the SOURCE side
of the cut. Everything else in the solver follows from this choice.

All quantities are integers in units where one oscillation cell costs
w = S (the capacity scale) and the forcing costs q(x) = round(2 r S g(x)).

For a window cell x with stencil S_x the oscillation indicator is
cov(E in S_x) * cov(S_x minus E). Cells of S_x that are fixed (stored
cells off the free region, or exterior cells) make one of the two factors
constant; the rest is encoded with auxiliary nodes:

* alpha_x -> sink with capacity w, and y -> alpha_x infinite for free y:
  pays w iff some free y in S_x lies in E.
* source -> beta_x with capacity w, and beta_x -> y infinite for free y:
  pays w iff some free y in S_x lies outside E.
* both present: the constant -w joins the offset, since
  cov(A) * cov(B) = cov(A) + cov(B) - 1 when A and B cover S_x.

The infinite arcs to a whole stencil are shared through sparse-table nodes
along the last axis: a node per (line, start, 2^j) block holding a free
cell, wired to its two half-blocks. Each stencil row then needs two block
arcs instead of one arc per cell.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from minkowski_lab.domain.errors import CapacityOverflowError
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, BoolArray
from minkowski_lab.grid.stencil import DEFAULT_STENCIL_CAP, BallStencil, ball_stencil
from minkowski_lab.morphology.operators import dilation_bits
from minkowski_lab.solver.spec import DirichletSpec

logger = logging.getLogger(__name__)

IntArray = NDArray[np.int64]

# Infinite-arc residuals grow by at most the flow value, and doubles hold
# integers exactly up to 2**53.
MAX_EXACT_CAPACITY = 2**52


class Encoding(str, Enum):
    """How stencil coverage arcs are laid out."""

    INTERVAL = "interval"
    DIRECT = "direct"


@dataclass(frozen=True, eq=False)
class CutGraph:
    """Directed graph with integer capacities and a constant offset.

    Nodes 0..len(free_cells)-1 are the free cells (flat stored indices in
    ``free_cells``); ``source`` and ``sink`` are the last two nodes. Any
    cut's value plus ``offset`` is the scaled energy of the induced mask.
    """

    node_count: int
    source: int
    sink: int
    tails: IntArray
    heads: IntArray
    caps: IntArray
    offset: int
    infinity: int
    free_cells: IntArray
    capacity_scale: int
    alpha_count: int = 0
    beta_count: int = 0

    @property
    def arc_count(self) -> int:
        return int(self.tails.size)

    @property
    def free_count(self) -> int:
        return int(self.free_cells.size)

    def cut_value(self, source_side: BoolArray) -> int:
        """Sum of capacities of arcs leaving the source side."""
        crossing = source_side[self.tails] & ~source_side[self.heads]
        return int(self.caps[crossing].sum())

    def decoded_energy(self, source_side: BoolArray) -> int:
        """Scaled energy (cut value + offset) of a cut."""
        return self.cut_value(source_side) + self.offset


@dataclass
class _ArcBuffer:
    """Growable arc lists, finite and infinite kept apart."""

    finite_tails: list[IntArray] = field(default_factory=list)
    finite_heads: list[IntArray] = field(default_factory=list)
    finite_caps: list[IntArray] = field(default_factory=list)
    inf_tails: list[IntArray] = field(default_factory=list)
    inf_heads: list[IntArray] = field(default_factory=list)

    def finite(self, tails: IntArray, heads: IntArray, caps: IntArray) -> None:
        self.finite_tails.append(np.asarray(tails, dtype=np.int64))
        self.finite_heads.append(np.asarray(heads, dtype=np.int64))
        self.finite_caps.append(np.asarray(caps, dtype=np.int64))

    def infinite(self, tails: IntArray, heads: IntArray) -> None:
        keep = (tails >= 0) & (heads >= 0)
        self.inf_tails.append(np.asarray(tails[keep], dtype=np.int64))
        self.inf_heads.append(np.asarray(heads[keep], dtype=np.int64))


def _concat(parts: list[IntArray]) -> IntArray:
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


class _SparseTables:
    """Block nodes over lines along the last axis, one table per tree."""

    def __init__(self, free: BoolArray, leaf_ids: IntArray, max_len: int) -> None:
        self.length = free.shape[-1]
        self.leaf_ids = leaf_ids
        zero = np.zeros((*free.shape[:-1], 1), dtype=np.int64)
        self.cumulative = np.concatenate([zero, np.cumsum(free, axis=-1, dtype=np.int64)], axis=-1)
        self.top = int(np.floor(np.log2(max_len))) if max_len >= 1 else 0

    def allocate(self, next_id: int) -> tuple[list[IntArray], int]:
        """Node ids per level (level 0 = free-cell ids); -1 marks absent blocks."""
        levels = [self.leaf_ids]
        for j in range(1, self.top + 1):
            size = 1 << j
            starts = self.length - size + 1
            counts = self.cumulative[..., size : size + starts] - self.cumulative[..., :starts]
            ids = np.full(counts.shape, -1, dtype=np.int64)
            present = counts > 0
            n_present = int(np.count_nonzero(present))
            ids[present] = np.arange(next_id, next_id + n_present, dtype=np.int64)
            next_id += n_present
            levels.append(ids)
        return levels, next_id

    def wire(self, levels: list[IntArray], arcs: _ArcBuffer, upward: bool) -> None:
        """Infinite arcs between each block and its two halves."""
        for j in range(1, len(levels)):
            half = 1 << (j - 1)
            parent = levels[j]
            starts = parent.shape[-1]
            for shift in (0, half):
                child = levels[j - 1][..., shift : shift + starts]
                if upward:
                    arcs.infinite(child.ravel(), parent.ravel())
                else:
                    arcs.infinite(parent.ravel(), child.ravel())


def _pieces(
    t: IntArray, half_width: int, length: int, periodic: bool
) -> list[tuple[IntArray, IntArray, BoolArray]]:
    """Split [t - hw, t + hw] into in-range intervals along the last axis."""
    a = t - half_width
    b = t + half_width
    ones = np.ones(t.shape, dtype=bool)
    if periodic:
        if 2 * half_width + 1 >= length:
            return [(np.zeros_like(t), np.full_like(t, length - 1), ones)]
        start = np.mod(a, length)
        stop = start + 2 * half_width
        wraps = stop >= length
        first_stop = np.where(wraps, length - 1, stop)
        return [
            (start, first_stop, ones),
            (np.zeros_like(t), stop - length, wraps),
        ]
    lo = np.maximum(a, 0)
    hi = np.minimum(b, length - 1)
    return [(lo, hi, lo <= hi)]


def _row_blocks(
    geom: GridGeometry,
    centers: IntArray,
    stencil: BallStencil,
    levels: list[IntArray],
) -> list[tuple[IntArray, IntArray]]:
    """(block id, row owner position) pairs covering each stencil row.

    ``centers`` are cell indices (X, dim); owners index into that array.
    """
    out: list[tuple[IntArray, IntArray]] = []
    length = geom.shape[-1]
    periodic_last = geom.periodic_axes[-1]
    owners_all = np.arange(centers.shape[0], dtype=np.int64)
    for prefix, half_width in stencil.rows():
        base = centers.copy()
        if prefix:
            base[:, :-1] += np.asarray(prefix, dtype=np.int64)
        base = geom.reduce(base)
        ok = np.ones(base.shape[0], dtype=bool)
        for axis in range(geom.dim - 1):
            ok &= (base[:, axis] >= 0) & (base[:, axis] < geom.shape[axis])
        if not ok.any():
            continue
        base = base[ok]
        owners = owners_all[ok]
        line = tuple(base[:, axis] for axis in range(geom.dim - 1))
        for lo, hi, valid in _pieces(base[:, -1], half_width, length, periodic_last):
            if not valid.any():
                continue
            lo, hi, piece_owner = lo[valid], hi[valid], owners[valid]
            piece_line = tuple(c[valid] for c in line)
            span = hi - lo + 1
            level = np.frexp(span.astype(np.float64))[1].astype(np.int64) - 1
            for j in np.unique(level):
                sel = level == j
                size = 1 << int(j)
                sel_line = tuple(c[sel] for c in piece_line)
                for start in (lo[sel], hi[sel] - size + 1):
                    ids = levels[int(j)][(*sel_line, start)]
                    out.append((ids, piece_owner[sel]))
    return out


def build_graph(
    spec: DirichletSpec,
    encoding: Encoding = Encoding.INTERVAL,
    stencil_cap: float = DEFAULT_STENCIL_CAP,
) -> CutGraph:
    """Encode the Dirichlet energy as an s-t cut problem.

    Args:
        spec: Problem to encode
        encoding: Interval (shared block nodes) or direct (one arc per stencil cell)
        stencil_cap: Largest accepted r/h

    Returns:
        CutGraph whose minimum cut value plus offset is the scaled minimum energy

    Raises:
        CapacityOverflowError: If capacities exceed the exact double-precision range
    """
    geom = spec.geometry
    r = spec.r
    w = spec.capacity_scale
    stencil = ball_stencil(r, geom.spacing, geom.dim, stencil_cap)

    free = np.asarray(spec.free)
    window = spec.window.cells
    boundary = spec.boundary

    free_cells = np.flatnonzero(free.ravel()).astype(np.int64)
    free_count = int(free_cells.size)
    node_of = np.full(geom.cell_count, -1, dtype=np.int64)
    node_of[free_cells] = np.arange(free_count, dtype=np.int64)
    node_grid = node_of.reshape(geom.shape)

    fixed_in = BinaryMask(geom, boundary.bits & ~free, boundary.extension)
    fixed_out = BinaryMask(geom, ~boundary.bits & ~free, boundary.extension.complement())
    touches_in = dilation_bits(fixed_in, r)
    touches_out = dilation_bits(fixed_out, r)
    touches_free = dilation_bits(BinaryMask(geom, free, ExtensionRule.constant_outside()), r)

    need_alpha = window & touches_free & ~touches_in
    need_beta = window & touches_free & ~touches_out
    offset = w * int(np.count_nonzero(window & touches_in & touches_out))
    offset -= w * int(np.count_nonzero(need_alpha & need_beta))

    q = spec.forcing_units()
    offset += int(q[window & boundary.bits & ~free].sum())

    next_id = free_count
    alpha_cells = np.argwhere(need_alpha).astype(np.int64)
    alpha_ids = np.arange(next_id, next_id + alpha_cells.shape[0], dtype=np.int64)
    next_id += alpha_cells.shape[0]
    beta_cells = np.argwhere(need_beta).astype(np.int64)
    beta_ids = np.arange(next_id, next_id + beta_cells.shape[0], dtype=np.int64)
    next_id += beta_cells.shape[0]

    arcs = _ArcBuffer()

    if encoding == Encoding.DIRECT:
        sides = ((alpha_cells, alpha_ids, True), (beta_cells, beta_ids, False))
        for k in stencil.offsets:
            for cells, aux, upward in sides:
                if cells.shape[0] == 0:
                    continue
                nb = geom.reduce(cells + k)
                inside = geom.in_window(nb)
                ids = np.full(cells.shape[0], -1, dtype=np.int64)
                ids[inside] = node_grid[tuple(nb[inside].T)]
                if upward:
                    arcs.infinite(ids, aux)
                else:
                    arcs.infinite(aux, ids)
    else:
        max_len = min(2 * stencil.reach + 1, geom.shape[-1])
        tables = _SparseTables(free, node_grid, max_len)
        for cells, aux, upward in ((alpha_cells, alpha_ids, True), (beta_cells, beta_ids, False)):
            if cells.shape[0] == 0:
                continue
            levels, next_id = tables.allocate(next_id)
            tables.wire(levels, arcs, upward)
            for block_ids, owners in _row_blocks(geom, cells, stencil, levels):
                if upward:
                    arcs.infinite(block_ids, aux[owners])
                else:
                    arcs.infinite(aux[owners], block_ids)

    source = next_id
    sink = next_id + 1
    node_count = next_id + 2

    arcs.finite(alpha_ids, np.full_like(alpha_ids, sink), np.full_like(alpha_ids, w))
    arcs.finite(np.full_like(beta_ids, source), beta_ids, np.full_like(beta_ids, w))

    in_window = window.ravel()[free_cells]
    q_free = np.where(in_window, q.ravel()[free_cells], 0)
    nodes = np.arange(free_count, dtype=np.int64)
    positive = q_free > 0
    negative = q_free < 0
    arcs.finite(nodes[positive], np.full(int(positive.sum()), sink), q_free[positive])
    arcs.finite(np.full(int(negative.sum()), source), nodes[negative], -q_free[negative])
    offset += int(q_free[negative].sum())

    finite_caps = _concat(arcs.finite_caps)
    infinity = int(finite_caps.sum()) + 1
    if infinity > MAX_EXACT_CAPACITY:
        raise CapacityOverflowError(infinity, MAX_EXACT_CAPACITY, {"capacity_scale": w})

    inf_tails = _concat(arcs.inf_tails)
    inf_heads = _concat(arcs.inf_heads)
    if inf_tails.size:
        keys = np.unique(inf_tails * node_count + inf_heads)
        inf_tails, inf_heads = keys // node_count, keys % node_count

    tails = np.concatenate([_concat(arcs.finite_tails), inf_tails])
    heads = np.concatenate([_concat(arcs.finite_heads), inf_heads])
    caps = np.concatenate([finite_caps, np.full(inf_tails.size, infinity, dtype=np.int64)])

    logger.info(
        "Cut graph built",
        extra={
            "free_cells": free_count,
            "alpha": int(alpha_ids.size),
            "beta": int(beta_ids.size),
            "nodes": node_count,
            "arcs": int(tails.size),
            "encoding": encoding.value,
        },
    )
    return CutGraph(
        node_count=node_count,
        source=source,
        sink=sink,
        tails=tails,
        heads=heads,
        caps=caps,
        offset=offset,
        infinity=infinity,
        free_cells=free_cells,
        capacity_scale=w,
        alpha_count=int(alpha_ids.size),
        beta_count=int(beta_ids.size),
    )
