"""Tests for the discrete coarea identity and field oscillation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.energy.coarea import coarea_check, oscillation_integral, window_extremes
from minkowski_lab.energy.perimeter import oscillation_count
from minkowski_lab.grid.geometry import GridGeometry
from minkowski_lab.grid.mask import BinaryMask, FieldExtension, ScalarField
from minkowski_lab.grid.window import Window

GEOMETRY = GridGeometry(dim=2, shape=(10, 10), spacing=1.0)

level_fields = st.lists(
    st.integers(min_value=-3, max_value=3), min_size=100, max_size=100
).map(lambda values: ScalarField(GEOMETRY, np.array(values, dtype=float).reshape(10, 10)))


class TestCoarea:
    """Tests for coarea_check."""

    @given(u=level_fields, r=st.sampled_from([1.0, 2.0, 4.0]))
    @settings(max_examples=50, deadline=None)
    def test_identity_is_exact(self, u: ScalarField, r: float) -> None:
        """Oscillation of u splits exactly into its superlevel oscillations."""
        check = coarea_check(u, Window.full(GEOMETRY), r)
        assert check.exact
        assert check.lhs == pytest.approx(check.rhs)

    def test_periodic_field(self, rng: np.random.Generator) -> None:
        """The identity holds for periodic fields too."""
        geom = GridGeometry(dim=2, shape=(8, 8), spacing=0.5, periodic_axes=(True, True))
        values = rng.integers(0, 4, geom.shape).astype(float) * 0.25
        u = ScalarField(geom, values, FieldExtension.PERIODIC)
        assert coarea_check(u, Window.full(geom), 1.0).exact

    def test_too_many_levels(self) -> None:
        """Fields with more than 64 levels are refused."""
        u = ScalarField(GEOMETRY, np.arange(100, dtype=float).reshape(10, 10))
        with pytest.raises(GeometryError):
            coarea_check(u, Window.full(GEOMETRY), 1.0)


class TestOscillationIntegral:
    """Tests for window_extremes and oscillation_integral."""

    def test_indicator_gives_oscillation_count(
        self, random_mask_pair: tuple[BinaryMask, BinaryMask], full_window: Window
    ) -> None:
        """For an indicator the integral is the oscillation volume."""
        a, _ = random_mask_pair
        u = ScalarField.indicator(a, 1.0)
        expected = oscillation_count(a, full_window, 2.0) * a.geometry.cell_volume
        assert oscillation_integral(u, full_window, 2.0) == expected

    def test_constant_field_has_no_oscillation_inside(self) -> None:
        """A constant field oscillates only where the ball reaches the zero exterior."""
        u = ScalarField.constant(GEOMETRY, 2.0)
        interior = Window.box(GEOMETRY, (2.0, 2.0), (8.0, 8.0))
        assert oscillation_integral(u, interior, 1.0) == 0.0
        top, bottom = window_extremes(u, Window.full(GEOMETRY), 1.0)
        assert top.max() == 2.0
        assert bottom.min() == 0.0

    def test_window_geometry_checked(self, unit_geometry: GridGeometry) -> None:
        """Field and window must share a lattice."""
        with pytest.raises(GeometryError):
            oscillation_integral(ScalarField.zeros(GEOMETRY), Window.full(unit_geometry), 1.0)
