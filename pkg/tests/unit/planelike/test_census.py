"""Tests for the cube density census and the ordered-inclusion check."""

import numpy as np

from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.planelike.birkhoff import birkhoff_violations, check_birkhoff
from minkowski_lab.planelike.census import classify_cubes
from minkowski_lab.planelike.direction import rational_basis

GEOMETRY = GridGeometry(dim=2, shape=(8, 16), spacing=0.5)


def _lower_half_plane() -> BinaryMask:
    """{y < 4} on a 4x8 unit box, two cells per unit."""
    bits = np.zeros(GEOMETRY.shape, dtype=bool)
    bits[:, :8] = True
    return BinaryMask(GEOMETRY, bits, ExtensionRule.half_space((0, 1), 4.0))


class TestClassifyCubes:
    """Tests for classify_cubes on a flat interface."""

    def test_counts(self) -> None:
        """Three rows of black cubes, one grey row, three white rows."""
        census = classify_cubes(_lower_half_plane(), 1.0, rational_basis((0, 1)), (0, 0), (3, 7))
        assert census.cube_side == 2
        assert census.cube_cells == 64
        assert census.threshold_cells == 4
        assert (census.black, census.grey, census.white) == (9, 3, 9)
        assert census.multicolored == 3
        assert census.almost_black == census.almost_white == 0
        assert census.identities_hold()

    def test_layers_and_monotone(self) -> None:
        """Layers are ordered along omega and densities decrease upward."""
        census = classify_cubes(_lower_half_plane(), 1.0, rational_basis((0, 1)), (0, 0), (3, 7))
        assert census.layers_ordered()
        assert census.monotone
        assert census.extents["black"] == (1.0, 3.0)
        assert census.extents["white"] == (5.0, 7.0)
        assert census.extents["almost_black"] is None

    def test_reversed_direction_not_monotone(self) -> None:
        """Against the opposite normal the densities increase."""
        census = classify_cubes(_lower_half_plane(), 1.0, rational_basis((0, -1)), (0, 0), (3, 7))
        assert not census.monotone

    def test_period_shift_breaks_monotone(self) -> None:
        """A tilted set decreasing along both axes still changes along K = (1, -1)."""
        geometry = GridGeometry(dim=2, shape=(16, 16), spacing=0.5)
        centers = geometry.center_grid()
        bits = centers[..., 0] + 2 * centers[..., 1] < 12
        mask = BinaryMask(geometry, bits, ExtensionRule.half_space((1, 2), 12.0))
        direction = rational_basis((1, 1))
        census = classify_cubes(mask, 0.5, direction, (0, 0), (7, 7))
        assert direction.period_basis == ((1, -1),)
        assert not census.monotone

    def test_grey_is_union_of_foggy(self) -> None:
        """Small r: every grey cube is foggy; huge r: a half-full cube is neither."""
        small = classify_cubes(_lower_half_plane(), 1.0, rational_basis((0, 1)), (0, 0), (3, 7))
        assert small.foggy_black + small.foggy_white - small.multicolored == small.grey
        large = classify_cubes(_lower_half_plane(), 3.0, rational_basis((0, 1)), (0, 0), (3, 7))
        assert large.grey == 3
        assert large.foggy_black == large.foggy_white == 0
        assert not large.identities_hold()


class TestBirkhoff:
    """Tests for the ordered-inclusion property."""

    def test_half_plane_holds(self) -> None:
        """A lower half-plane is mapped into itself by downward shifts."""
        assert check_birkhoff(_lower_half_plane(), rational_basis((0, 1)))

    def test_wrong_orientation_fails(self) -> None:
        """Relative to -omega the upward shift leaves the set."""
        violations = birkhoff_violations(_lower_half_plane(), rational_basis((0, -1)))
        assert (0, 1) in violations
        assert violations[(0, 1)] > 0

    def test_bump_fails(self) -> None:
        """A single protruding column breaks sideways inclusion."""
        mask = _lower_half_plane()
        bits = np.array(mask.bits)
        bits[3, 8:12] = True
        bumped = mask.with_bits(bits)
        assert not check_birkhoff(bumped, rational_basis((0, 1)))
