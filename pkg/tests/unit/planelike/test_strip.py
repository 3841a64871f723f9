"""Tests for periodic strip problems."""

import numpy as np
import pytest
from pydantic import ValidationError

from minkowski_lab.domain.errors import SpecificationError
from minkowski_lab.planelike.direction import rational_basis
from minkowski_lab.planelike.strip import (
    PeriodicForcing,
    StripSpec,
    build_strip,
    forcing_template,
    projections,
)


class TestForcingTemplate:
    """Tests for the unit-cell forcing samples."""

    @pytest.mark.parametrize("kind", [PeriodicForcing.CHECKERBOARD, PeriodicForcing.COSINE])
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_zero_mean_and_bound(self, kind: PeriodicForcing, dim: int) -> None:
        """Samples average to zero and peak at eta."""
        values = forcing_template(kind, 4, dim, 0.1)
        assert values.shape == (4,) * dim
        assert values.mean() == pytest.approx(0.0, abs=1e-12)
        assert np.abs(values).max() == pytest.approx(0.1)

    def test_zero(self) -> None:
        """The zero medium is identically zero."""
        assert not forcing_template(PeriodicForcing.ZERO, 3, 2, 0.1).any()


class TestStripSpec:
    """Tests for strip parameter validation."""

    def test_defaults(self) -> None:
        """Repeats cover one stencil diameter."""
        strip = StripSpec(direction=rational_basis((0, 1)), M=2.0, r=1.0, h=0.5)
        assert strip.cells_per_unit == 2
        assert strip.period_repeats() == (3,)

    @pytest.mark.parametrize(
        "changes",
        [{"M": 1.0}, {"eta": 0.5}, {"h": 0.3}, {"r": 0.0}, {"repeats": (1, 1)}, {"repeats": (0,)}],
    )
    def test_invalid(self, changes: dict[str, object]) -> None:
        """Out-of-range parameters are rejected."""
        params: dict[str, object] = {
            "direction": rational_basis((0, 1)),
            "M": 2.0,
            "r": 1.0,
            "h": 0.5,
        }
        params.update(changes)
        with pytest.raises(ValidationError):
            StripSpec(**params)  # type: ignore[arg-type]

    def test_custom_cell_values(self) -> None:
        """Caller samples replace the built-in medium."""
        values = (0.05, -0.05, -0.05, 0.05)
        strip = StripSpec(
            direction=rational_basis((0, 1)),
            M=2.0,
            r=1.0,
            h=0.5,
            forcing=PeriodicForcing.CUSTOM,
            cell_values=values,
        )
        np.testing.assert_array_equal(strip.template(), np.reshape(values, (2, 2)))

    @pytest.mark.parametrize(
        "changes",
        [
            {"cell_values": (0.05, -0.05, -0.05, 0.05)},
            {"forcing": PeriodicForcing.CUSTOM},
            {"forcing": PeriodicForcing.CUSTOM, "cell_values": (0.05, -0.05)},
            {"forcing": PeriodicForcing.CUSTOM, "cell_values": (0.1, 0.0, 0.0, 0.0)},
            {"forcing": PeriodicForcing.CUSTOM, "cell_values": (0.2, -0.2, -0.2, 0.2)},
        ],
    )
    def test_custom_cell_values_invalid(self, changes: dict[str, object]) -> None:
        """Samples need the custom forcing, one value per cell, zero mean and sup <= eta."""
        params: dict[str, object] = {
            "direction": rational_basis((0, 1)),
            "M": 2.0,
            "r": 1.0,
            "h": 0.5,
        }
        params.update(changes)
        with pytest.raises(ValidationError):
            StripSpec(**params)  # type: ignore[arg-type]

    def test_short_period_rejected(self) -> None:
        """A cross-section narrower than the stencil cannot be built."""
        strip = StripSpec(direction=rational_basis((0, 1)), M=2.0, r=1.0, h=0.5, repeats=(1,))
        with pytest.raises(SpecificationError):
            build_strip(strip)


class TestBuildStrip:
    """Tests for the Dirichlet problem on a strip."""

    @pytest.mark.parametrize("omega", [(0, 1), (1, 1), (1, 2)])
    def test_constraint_bands(self, omega: tuple[int, int]) -> None:
        """Free cells fill |omega . x| < M inside the window |omega . x| < 2M."""
        strip = StripSpec(direction=rational_basis(omega), M=2.0, r=0.5, h=0.5)
        problem = build_strip(strip)
        proj = projections(problem.geometry, strip.direction)
        np.testing.assert_array_equal(np.asarray(problem.free), np.abs(proj) < 2.0)
        np.testing.assert_array_equal(problem.window.cells, np.abs(proj) < 4.0)
        assert problem.geometry.periodic_axes.count(True) == 1
        assert np.all(problem.boundary.bits[proj <= -2.0])
        assert not np.any(problem.boundary.bits[proj >= 2.0])

    def test_forcing_is_periodic(self) -> None:
        """The sampled medium repeats with the unit lattice."""
        strip = StripSpec(direction=rational_basis((0, 1)), M=2.0, r=0.5, h=0.5)
        problem = build_strip(strip)
        assert problem.g is not None
        values = problem.g.values
        np.testing.assert_allclose(values[:, 2:], values[:, :-2])
        np.testing.assert_allclose(values[2:, :], values[:-2, :])
