"""Energy windows: cell subsets of the stored lattice."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.grid.geometry import GridGeometry
from minkowski_lab.grid.mask import BinaryMask, BoolArray, frozen_array


@dataclass(frozen=True, eq=False)
class Window:
    """A subset of stored cells, given as a boolean array over the geometry.

    ``label`` records how the window was built, for reports.
    """

    geometry: GridGeometry
    cells: BoolArray
    label: str = "custom"

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=bool)
        if cells.shape != self.geometry.shape:
            raise GeometryError(
                f"window shape {cells.shape} does not match geometry {self.geometry.shape}",
                field="window",
            )
        object.__setattr__(self, "cells", frozen_array(cells))

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.cells))

    @property
    def volume(self) -> float:
        return self.count * self.geometry.cell_volume

    @classmethod
    def full(cls, geometry: GridGeometry) -> Window:
        return cls(geometry, np.ones(geometry.shape, dtype=bool), "full")

    @classmethod
    def ball(cls, geometry: GridGeometry, center: tuple[float, ...], radius: float) -> Window:
        """Cells whose centers lie in the closed ball B_radius(center)."""
        if radius < 0:
            raise GeometryError(f"window radius must be >= 0, got {radius}", field="radius")
        offsets = geometry.center_grid() - np.asarray(center, dtype=np.float64)
        inside = (offsets**2).sum(axis=-1) <= radius**2 * (1 + 1e-12)
        label = "ball:" + ",".join(f"{c:g}" for c in center) + f",{radius:g}"
        return cls(geometry, inside, label)

    @classmethod
    def box(
        cls, geometry: GridGeometry, lo: tuple[float, ...], hi: tuple[float, ...]
    ) -> Window:
        """Cells whose centers lie in the closed box [lo, hi]."""
        centers = geometry.center_grid()
        inside = np.all((centers >= np.asarray(lo)) & (centers <= np.asarray(hi)), axis=-1)
        label = "box:" + ",".join(f"{v:g}" for v in (*lo, *hi))
        return cls(geometry, inside, label)

    @classmethod
    def from_mask(cls, mask: BinaryMask, label: str = "mask") -> Window:
        return cls(mask.geometry, mask.bits, label)

    @classmethod
    def parse(cls, geometry: GridGeometry, text: str) -> Window:
        """Parse ``full``, ``ball:c1,..,cn,R`` or ``box:lo1,..,lon,hi1,..,hin``.

        Raises:
            GeometryError: If the text does not describe a window for this dim
        """
        kind, _, rest = text.partition(":")
        n = geometry.dim
        try:
            numbers = [float(v) for v in rest.split(",")] if rest else []
        except ValueError as e:
            raise GeometryError(f"malformed window {text!r}", field="window") from e
        if kind == "full" and not numbers:
            return cls.full(geometry)
        if kind == "ball" and len(numbers) == n + 1:
            return cls.ball(geometry, tuple(numbers[:n]), numbers[n])
        if kind == "box" and len(numbers) == 2 * n:
            return cls.box(geometry, tuple(numbers[:n]), tuple(numbers[n:]))
        raise GeometryError(
            f"window must be 'full', 'ball:<{n} coords>,R' or 'box:<{2 * n} values>', got {text!r}",
            field="window",
        )
