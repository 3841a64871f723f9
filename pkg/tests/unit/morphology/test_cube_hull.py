"""Tests for the cube-hull approximation."""

import numpy as np
import pytest

from minkowski_lab.domain.errors import CubeTooSmallError
from minkowski_lab.energy.perimeter import perimeter_r
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window
from minkowski_lab.morphology.cube_hull import cube_hull, cube_side_cells, face_perimeter


class TestFacePerimeter:
    """Tests for face_perimeter."""

    def test_interior_block(self) -> None:
        """A 2x2 block away from the edges has eight faces."""
        bits = np.zeros((4, 4), dtype=bool)
        bits[1:3, 1:3] = True
        assert face_perimeter(bits, 1.0) == 8.0

    def test_window_edge_not_counted(self) -> None:
        """Faces on the window boundary are not counted."""
        bits = np.zeros((4, 4), dtype=bool)
        bits[:2, :2] = True
        assert face_perimeter(bits, 0.5) == pytest.approx(2.0)


class TestCubeHull:
    """Tests for cube_hull."""

    def test_side_rounding(self) -> None:
        """Cube side is r / (4 sqrt(n)) rounded up to whole cells."""
        assert cube_side_cells(1.0, 0.05, 2) == 4

    def test_too_small(self) -> None:
        """Cubes below one cell are refused."""
        with pytest.raises(CubeTooSmallError):
            cube_side_cells(0.2, 0.05, 2)

    def test_hull_covers_set(self, disk: BinaryMask) -> None:
        """The hull contains the set and differs from it near the boundary only."""
        hull = cube_hull(disk, 1.0)
        assert disk.issubset(hull.hull)
        assert hull.side_cells == 4
        assert hull.symmetric_difference < 2 * 4 * np.pi * 0.2

    def test_perimeter_controlled_by_per_r(self, disk: BinaryMask) -> None:
        """The hull's face perimeter stays within a dimensional constant of Per_r."""
        hull = cube_hull(disk, 1.0)
        per = perimeter_r(disk, Window.full(disk.geometry), 1.0)
        assert hull.face_perimeter <= 4 * per
        assert hull.face_perimeter >= per / 2
