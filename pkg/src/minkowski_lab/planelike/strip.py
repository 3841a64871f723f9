"""Periodic strips over a rational direction, stored as sheared quotient grids.

Lattice coordinates are those in which the medium g is Z^n-periodic. With
s = 1/h cells per lattice unit, cell a (absolute index) has center
(a + 1/2) h. A period vector t K_j becomes the cell translation s t K_j;
Hermite normal form puts its leading entry on a pivot axis, which turns
into a periodic axis of that length with the remaining entries as shear.
The one axis without a pivot runs across the strip and is stored as a
bounded range covering |omega_unit . x| < 2M.
"""

from __future__ import annotations

import logging
import math
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from pydantic import ConfigDict, Field, model_validator
from pydantic.dataclasses import dataclass

from minkowski_lab.domain.errors import SpecificationError
from minkowski_lab.grid.geometry import ExtensionRule, ExtensionVariant, GridGeometry, IndexArray
from minkowski_lab.grid.mask import BinaryMask, FloatArray, ScalarField
from minkowski_lab.grid.window import Window
from minkowski_lab.planelike.direction import RationalDirection
from minkowski_lab.solver.spec import DEFAULT_CAPACITY_SCALE, DirichletSpec

logger = logging.getLogger(__name__)


class PeriodicForcing(str, Enum):
    """Z^n-periodic media with zero average over the unit cell."""

    ZERO = "zero"
    CHECKERBOARD = "checkerboard"
    COSINE = "cosine"
    # Unit-cell samples supplied by the caller
    CUSTOM = "custom"


def forcing_template(
    kind: PeriodicForcing, cells_per_unit: int, dim: int, eta: float
) -> FloatArray:
    """Values of g on one lattice unit cell, sampled at cell centers.

    The sample is shifted to zero mean and rescaled to sup |g| = eta, so
    both properties hold exactly for the sampled field.
    """
    axis = (np.arange(cells_per_unit) + 0.5) / cells_per_unit
    coords = np.meshgrid(*([axis] * dim), indexing="ij")
    if kind == PeriodicForcing.ZERO:
        return np.zeros((cells_per_unit,) * dim)
    if kind == PeriodicForcing.CUSTOM:
        raise ValueError("custom forcing has no built-in template")
    if kind == PeriodicForcing.CHECKERBOARD:
        parity = sum(np.floor(2 * c).astype(np.int64) for c in coords) % 2
        values = np.where(parity == 0, 1.0, -1.0)
    elif kind == PeriodicForcing.COSINE:
        values = sum(np.cos(2 * np.pi * c) for c in coords) / dim
    else:
        raise ValueError(f"Unknown forcing: {kind}")
    values = values - values.mean()
    peak = float(np.abs(values).max())
    if peak > 0:
        values = values * (eta / peak)
    return values


@dataclass(frozen=True, config=ConfigDict(arbitrary_types_allowed=True))
class StripSpec:
    """Constrained periodic problem on the strip |omega . x| < 2M.

    ``repeats`` multiplies each period vector; None picks the smallest
    multiple whose length is at least one stencil diameter. With the custom
    forcing, ``cell_values`` holds the (1/h)^n unit-cell samples in
    row-major order; they must average to zero and stay within eta.
    """

    direction: RationalDirection
    M: float
    r: float
    h: float
    eta: float = 0.05
    forcing: PeriodicForcing = PeriodicForcing.CHECKERBOARD
    repeats: tuple[int, ...] | None = None
    capacity_scale: int = DEFAULT_CAPACITY_SCALE
    label: str = Field(default="strip")
    cell_values: tuple[float, ...] | None = None

    @model_validator(mode="after")
    def check_parameters(self) -> StripSpec:
        if self.M < 2:
            raise ValueError(f"M must be >= 2, got {self.M}")
        if not 0 <= self.eta <= 0.25:
            raise ValueError(f"eta must lie in [0, 0.25], got {self.eta}")
        if self.r <= 0 or self.h <= 0:
            raise ValueError("r and h must be > 0")
        s = round(1 / self.h)
        if s < 1 or abs(s * self.h - 1) > 1e-9:
            raise ValueError(f"1/h must be an integer, got h={self.h}")
        if self.repeats is not None:
            if len(self.repeats) != len(self.direction.period_basis):
                raise ValueError("one repeat count per period vector is required")
            if any(t < 1 for t in self.repeats):
                raise ValueError("repeat counts must be >= 1")
        if (self.forcing == PeriodicForcing.CUSTOM) != (self.cell_values is not None):
            raise ValueError("cell_values are required with, and only with, the custom forcing")
        cells = round(1 / self.h) ** self.direction.dim
        if self.cell_values is not None and len(self.cell_values) != cells:
            raise ValueError(f"cell_values needs {cells} samples, got {len(self.cell_values)}")
        template = self.template()
        resolution = 1 / (2 * self.r * self.capacity_scale)
        if abs(float(template.sum())) * self.h**self.direction.dim > resolution:
            raise ValueError("forcing does not average to zero over the unit cell")
        if float(np.abs(template).max(initial=0.0)) > self.eta * (1 + 1e-12):
            raise ValueError("forcing exceeds its sup bound eta")
        return self

    @property
    def cells_per_unit(self) -> int:
        return round(1 / self.h)

    def template(self) -> FloatArray:
        if self.cell_values is not None:
            shape = (self.cells_per_unit,) * self.direction.dim
            return np.asarray(self.cell_values, dtype=np.float64).reshape(shape)
        return forcing_template(self.forcing, self.cells_per_unit, self.direction.dim, self.eta)

    def period_repeats(self) -> tuple[int, ...]:
        """Multiples t_j of each K_j spanning the stored cross-section."""
        if self.repeats is not None:
            return self.repeats
        diameter = 2 * self.r + self.h
        return tuple(
            max(1, math.ceil(diameter / math.sqrt(sum(c * c for c in k))))
            for k in self.direction.period_basis
        )


def lattice_offset(geometry: GridGeometry) -> IndexArray:
    """Absolute lattice index of stored cell 0 (origin / h, exact)."""
    return np.rint(np.asarray(geometry.origin) / geometry.spacing).astype(np.int64)


def strip_geometry(spec: StripSpec, half_width: float) -> GridGeometry:
    """Sheared periodic grid covering |omega_unit . x| < half_width.

    Raises:
        SpecificationError: If a period of the cross-section is shorter
            than one stencil diameter
    """
    direction = spec.direction
    n = direction.dim
    s = spec.cells_per_unit
    h = spec.h
    repeats = spec.period_repeats()

    shape = [0] * n
    shear = [[0] * n for _ in range(n)]
    periodic = [False] * n
    for k, t, pivot in zip(direction.period_basis, repeats, direction.pivots()):
        length = t * math.sqrt(sum(c * c for c in k))
        if length < 2 * spec.r:
            raise SpecificationError(
                f"period {t}*{k} has length {length:.3g} < stencil diameter {2 * spec.r:.3g}",
                field="repeats",
            )
        shape[pivot] = s * t * k[pivot]
        periodic[pivot] = True
        for axis in range(pivot + 1, n):
            shear[pivot][axis] = s * t * k[axis]

    q = direction.free_axis()
    omega = direction.omega_int
    if omega[q] == 0:
        raise SpecificationError(f"axis {q} is parallel to the strip", field="direction")

    bound = (half_width + spec.r + 2 * h) * direction.norm
    partial_lo = 0.0
    partial_hi = 0.0
    for axis in range(n):
        if axis == q:
            continue
        ends = [omega[axis] * (a + 0.5) * h for a in (0, shape[axis] - 1)]
        partial_lo += min(ends)
        partial_hi += max(ends)
    ends_q = [(-bound - partial_hi) / (omega[q] * h), (bound - partial_lo) / (omega[q] * h)]
    q_lo = math.floor(min(ends_q) - 0.5) - 1
    q_hi = math.ceil(max(ends_q) - 0.5) + 1
    shape[q] = q_hi - q_lo + 1
    origin = [0.0] * n
    origin[q] = q_lo * h

    return GridGeometry(
        dim=n,
        shape=tuple(shape),
        spacing=h,
        origin=tuple(origin),
        periodic_axes=tuple(periodic),
        shear=tuple(tuple(row) for row in shear),
    )


def periodic_field(spec: StripSpec, geometry: GridGeometry) -> ScalarField:
    """Sample the unit-cell template at every stored cell."""
    s = spec.cells_per_unit
    absolute = geometry.index_grid() + lattice_offset(geometry)
    template = spec.template()
    residues = np.mod(absolute, s)
    return ScalarField(geometry, template[tuple(np.moveaxis(residues, -1, 0))])


def projections(geometry: GridGeometry, direction: RationalDirection) -> NDArray[np.float64]:
    """omega_unit . center for every stored cell."""
    return direction.projection(geometry.center_grid())


def build_strip(spec: StripSpec) -> DirichletSpec:
    """Dirichlet problem for the constrained periodic minimizer.

    Window: |omega_unit . x| < 2M. Cells with omega_unit . x <= -M are
    forced in, cells with omega_unit . x >= M forced out, the rest free.

    Raises:
        SpecificationError: If the cross-section is too narrow for the stencil
    """
    geometry = strip_geometry(spec, 2 * spec.M)
    proj = projections(geometry, spec.direction)
    window = Window(geometry, np.abs(proj) < 2 * spec.M, label=f"strip:{2 * spec.M:g}")
    free = np.abs(proj) < spec.M
    boundary = BinaryMask(
        geometry,
        proj <= 0,
        ExtensionRule.half_space(spec.direction.omega_int, 0.0),
    )
    g = None if spec.forcing == PeriodicForcing.ZERO else periodic_field(spec, geometry)
    omega_text = ",".join(str(c) for c in spec.direction.omega_int)
    logger.info(
        "Strip built",
        extra={
            "omega": omega_text,
            "shape": geometry.shape,
            "free_cells": int(free.sum()),
            "M": spec.M,
            "r": spec.r,
        },
    )
    return DirichletSpec(
        window=window,
        free=free,
        boundary=boundary,
        r=spec.r,
        g=g,
        capacity_scale=spec.capacity_scale,
        label=f"{spec.label}:omega={omega_text}:M={spec.M:g}",
    )


def unfold(mask: BinaryMask, lo: tuple[int, ...], hi: tuple[int, ...]) -> BinaryMask:
    """Materialize a strip mask on the plain index box [lo, hi).

    The result lives on an unsheared, non-periodic geometry whose cells
    sit at the same lattice positions as the originals.
    """
    geom = mask.geometry
    bits = mask.materialize(lo, hi)
    origin = tuple(o + a * geom.spacing for o, a in zip(geom.origin, lo))
    flat = GridGeometry(
        dim=geom.dim,
        shape=tuple(b - a for a, b in zip(lo, hi)),
        spacing=geom.spacing,
        origin=origin,
    )
    extension = mask.extension
    if extension.variant == ExtensionVariant.PERIODIC:
        extension = ExtensionRule.constant_outside()
    return BinaryMask(flat, bits, extension)
