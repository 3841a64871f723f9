"""Tests for Per_r and F_{r,g} evaluation."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.energy.perimeter import (
    EnergyBreakdown,
    energy,
    oscillation_count,
    perimeter_r,
    quantize_forcing,
    scaled_energy,
)
from minkowski_lab.grid.geometry import GridGeometry
from minkowski_lab.grid.mask import BinaryMask, ScalarField
from minkowski_lab.grid.shapes import HalfSpaceShape, rasterize
from minkowski_lab.grid.window import Window


class TestPerimeter:
    """Tests for perimeter_r."""

    @pytest.mark.parametrize("r", [0.1, 0.3, 0.5])
    def test_half_space_is_r_independent(self, r: float) -> None:
        """A flat interface across a unit window has Per_r = 1 for every r."""
        geom = GridGeometry.box((0.0, 0.0), (1.0, 1.0), 0.01)
        mask = rasterize(HalfSpaceShape(normal=(1, 0), offset=0.5), geom)
        assert perimeter_r(mask, Window.full(geom), r) == pytest.approx(1.0, rel=0.01)

    def test_disk_close_to_circumference(self, disk: BinaryMask) -> None:
        """Per_r of a disk of radius 2 is close to 4 pi for r <= R."""
        per = perimeter_r(disk, Window.full(disk.geometry), 0.5)
        assert per == pytest.approx(4 * math.pi, rel=0.05)

    def test_empty_and_full_sets(self, unit_geometry: GridGeometry, full_window: Window) -> None:
        """Sets equal to the whole space or nothing have zero perimeter."""
        assert perimeter_r(BinaryMask.empty(unit_geometry), full_window, 1.0) == 0.0
        assert perimeter_r(BinaryMask.full(unit_geometry), full_window, 1.0) == 0.0

    def test_window_restricts_count(self, disk: BinaryMask) -> None:
        """Only window cells contribute to the oscillation count."""
        full = oscillation_count(disk, Window.full(disk.geometry), 0.5)
        half = oscillation_count(disk, Window.box(disk.geometry, (-3.0, -3.0), (0.0, 3.0)), 0.5)
        assert 0 < half < full

    def test_window_geometry_checked(self, disk: BinaryMask, full_window: Window) -> None:
        """A window from another lattice is rejected."""
        with pytest.raises(GeometryError):
            perimeter_r(disk, full_window, 0.5)

    def test_complement_has_same_perimeter(
        self, random_mask_pair: tuple[BinaryMask, BinaryMask], full_window: Window
    ) -> None:
        """Per_r(E) = Per_r(complement of E)."""
        a, _ = random_mask_pair
        assert perimeter_r(a, full_window, 1.5) == perimeter_r(a.complement(), full_window, 1.5)


class TestEnergy:
    """Tests for energy and its fixed-point form."""

    def test_no_forcing(self, disk: BinaryMask) -> None:
        """Without g the energy is the perimeter term."""
        window = Window.full(disk.geometry)
        result = energy(disk, None, window, 0.5)
        assert result.bulk_term == 0.0
        assert result.total == result.perimeter_term
        assert result.scaled_total is None

    def test_constant_forcing_adds_volume(self, unit_geometry: GridGeometry) -> None:
        """A constant forcing adds g times the set volume in the window."""
        bits = np.zeros(unit_geometry.shape, dtype=bool)
        bits[2:5, 2:5] = True
        mask = BinaryMask.empty(unit_geometry).with_bits(bits)
        g = ScalarField.constant(unit_geometry, -0.5)
        result = energy(mask, g, Window.full(unit_geometry), 1.0)
        assert result.bulk_term == pytest.approx(-4.5)
        assert result.total == pytest.approx(result.perimeter_term - 4.5)

    def test_scaled_total_matches_scaled_energy(
        self, unit_geometry: GridGeometry, rng: np.random.Generator
    ) -> None:
        """The fixed-point energy agrees with scaled_energy exactly."""
        mask = BinaryMask.empty(unit_geometry).with_bits(rng.random(unit_geometry.shape) < 0.4)
        g = ScalarField(unit_geometry, rng.uniform(-1, 1, unit_geometry.shape))
        window = Window.full(unit_geometry)
        result = energy(mask, g, window, 1.5, capacity_scale=64)
        q = quantize_forcing(g.values, 1.5, 64)
        assert result.scaled_total == scaled_energy(mask, q, window, 1.5, 64)
        assert result.total == pytest.approx(
            result.scaled_total * unit_geometry.cell_volume / (2 * 1.5 * 64)
        )

    def test_quantization_rounds(self) -> None:
        """Forcing units are round(2 r S g)."""
        q = quantize_forcing(np.array([0.1, -0.26, 1.0]), 0.5, 10)
        np.testing.assert_array_equal(q, [1, -3, 10])

    def test_forcing_geometry_checked(self, disk: BinaryMask, unit_geometry: GridGeometry) -> None:
        """A forcing field on another lattice is rejected."""
        with pytest.raises(GeometryError):
            energy(disk, ScalarField.zeros(unit_geometry), Window.full(disk.geometry), 0.5)

    def test_breakdown_validates_total(self) -> None:
        """Inconsistent breakdowns cannot be constructed."""
        with pytest.raises(ValidationError):
            EnergyBreakdown(
                perimeter_term=1.0,
                bulk_term=1.0,
                total=3.0,
                r=1.0,
                h=1.0,
                window="full",
                osc_count=2,
            )
        with pytest.raises(ValidationError):
            EnergyBreakdown(
                perimeter_term=-1.0,
                bulk_term=1.0,
                total=0.0,
                r=1.0,
                h=1.0,
                window="full",
                osc_count=0,
            )
