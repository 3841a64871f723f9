"""Tests for exact squared distance transforms."""

import numpy as np
import pytest

from minkowski_lab.domain.errors import EmptySetError
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.morphology.distance import distance_transform, extended_set_nonempty


class TestDistanceTransform:
    """Tests for distance_transform."""

    def test_exact_integer_squares(self) -> None:
        """Squared distances are exact in cell units."""
        geom = GridGeometry(dim=2, shape=(10, 10), spacing=0.5)
        bits = np.zeros(geom.shape, dtype=bool)
        bits[0, 0] = True
        field = distance_transform(BinaryMask(geom, bits, ExtensionRule.constant_outside()))
        assert field.cells_sq[3, 4] == 25
        assert field.cells_sq[0, 0] == 0
        assert field.values[3, 4] == pytest.approx(25 * 0.25)

    def test_periodic_wrap(self) -> None:
        """Distances wrap around periodic axes."""
        geom = GridGeometry(dim=1, shape=(10,), spacing=1.0, periodic_axes=(True,))
        bits = np.zeros(10, dtype=bool)
        bits[0] = True
        field = distance_transform(BinaryMask(geom, bits, ExtensionRule.periodic()))
        assert field.cells_sq[9] == 1
        assert field.cells_sq[5] == 25

    def test_exterior_half_space(self, unit_geometry: GridGeometry) -> None:
        """An empty window next to a half-space measures distance to the exterior."""
        mask = BinaryMask(
            unit_geometry,
            np.zeros(unit_geometry.shape, dtype=bool),
            ExtensionRule.half_space((1, 0)),
        )
        field = distance_transform(mask)
        np.testing.assert_array_equal(field.cells_sq[:, 0], (np.arange(12) + 1) ** 2)

    def test_far_exterior_found_by_growing_pad(self, unit_geometry: GridGeometry) -> None:
        """A small initial pad is doubled until the exterior set is reached."""
        mask = BinaryMask(
            unit_geometry,
            np.zeros(unit_geometry.shape, dtype=bool),
            ExtensionRule.half_space((1, 0), -20.0),
        )
        field = distance_transform(mask, pad=1)
        assert field.cells_sq[0, 0] == 21**2

    def test_empty_set_raises(self, unit_geometry: GridGeometry) -> None:
        """The distance to an empty set is undefined."""
        with pytest.raises(EmptySetError):
            distance_transform(BinaryMask.empty(unit_geometry))

    def test_empty_periodic_set_raises(self) -> None:
        """An empty set on a fully periodic lattice stays empty."""
        geom = GridGeometry(dim=1, shape=(5,), spacing=1.0, periodic_axes=(True,))
        mask = BinaryMask(geom, np.zeros(5, dtype=bool), ExtensionRule.constant_inside())
        assert not extended_set_nonempty(mask)
        with pytest.raises(EmptySetError):
            distance_transform(mask)

    def test_values_are_read_only(self, disk: BinaryMask) -> None:
        """The squared distance array is frozen."""
        field = distance_transform(disk)
        with pytest.raises(ValueError):
            field.cells_sq[0, 0] = 0
