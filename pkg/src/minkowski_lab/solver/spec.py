"""Dirichlet problem specification and solver result types."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from minkowski_lab.domain.errors import SpecificationError
from minkowski_lab.energy.perimeter import EnergyBreakdown, quantize_forcing
from minkowski_lab.grid.geometry import ExtensionRule, ExtensionVariant, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, BoolArray, ScalarField, frozen_array
from minkowski_lab.grid.window import Window
from minkowski_lab.morphology.operators import erode

DEFAULT_CAPACITY_SCALE = 2**20


class Canonical(str, Enum):
    """Which minimizer to extract when several exist.

    MINIMAL is the intersection of all minimizers, MAXIMAL their union.
    ARBITRARY promises no extremality (it currently returns the minimal one).
    """

    MINIMAL = "minimal"
    MAXIMAL = "maximal"
    ARBITRARY = "arbitrary"


@dataclass(frozen=True, eq=False)
class DirichletSpec:
    """Minimize F_{r,g}(E, window) over masks agreeing with ``boundary`` off ``free``.

    Args:
        window: Energy window; oscillation is counted at its cells, with
            stencils reading outside it through the boundary mask
        free: Cells whose membership is optimized
        boundary: Data E_o, including its exterior rule
        g: Forcing field, or None for g = 0
        r: Radius
        capacity_scale: Fixed-point denominator S; g is used as round(2 r S g)
        enforce_margin: Require free to lie inside the window eroded by r.
            Only experiments that deliberately relax the constraint turn it off.
    """

    window: Window
    free: BoolArray
    boundary: BinaryMask
    r: float
    g: ScalarField | None = None
    capacity_scale: int = DEFAULT_CAPACITY_SCALE
    enforce_margin: bool = True
    label: str = field(default="dirichlet")

    def __post_init__(self) -> None:
        geom = self.boundary.geometry
        free = np.asarray(self.free, dtype=bool)
        if free.shape != geom.shape:
            raise SpecificationError(
                f"free region shape {free.shape} does not match geometry {geom.shape}",
                field="free",
            )
        object.__setattr__(self, "free", frozen_array(free))
        if self.window.geometry != geom:
            raise SpecificationError("window geometry differs from boundary", field="window")
        if self.g is not None and self.g.geometry != geom:
            raise SpecificationError("forcing geometry differs from boundary", field="g")
        if self.r <= 0:
            raise SpecificationError(f"radius must be > 0, got {self.r}", field="r")
        if self.capacity_scale < 1:
            raise SpecificationError(
                f"capacity_scale must be >= 1, got {self.capacity_scale}", field="capacity_scale"
            )
        if free.any() and self.boundary.extension.variant in (
            ExtensionVariant.PERIODIC,
            ExtensionVariant.MIRROR,
        ):
            raise SpecificationError(
                "boundary exterior may not copy stored cells; use a periodic geometry instead",
                field="boundary",
            )
        if np.any(free & ~self.window.cells):
            raise SpecificationError("free region must lie inside the window", field="free")
        if self.enforce_margin and free.any():
            window_set = BinaryMask(geom, self.window.cells, ExtensionRule.constant_outside())
            interior = erode(window_set, self.r).bits
            if np.any(free & ~interior):
                raise SpecificationError(
                    "free region must lie in the window eroded by r",
                    field="free",
                    context={"violations": int(np.count_nonzero(free & ~interior))},
                )

    @property
    def geometry(self) -> GridGeometry:
        return self.boundary.geometry

    @property
    def free_count(self) -> int:
        return int(np.count_nonzero(self.free))

    def forcing_units(self) -> NDArray[np.int64]:
        """Quantized forcing q = round(2 r S g) per stored cell."""
        if self.g is None:
            return np.zeros(self.geometry.shape, dtype=np.int64)
        return quantize_forcing(self.g.values, self.r, self.capacity_scale)

    def compose(self, free_bits: BoolArray) -> BinaryMask:
        """Mask equal to the boundary off the free region and ``free_bits`` on it."""
        bits = np.where(self.free, free_bits, self.boundary.bits)
        return self.boundary.with_bits(bits)


@dataclass(frozen=True, eq=False)
class MinimizerResult:
    """Exact minimizer with its energy and max-flow certificate."""

    mask: BinaryMask
    energy: EnergyBreakdown
    flow_value: int
    canonical: Canonical
    node_count: int = 0
    arc_count: int = 0
