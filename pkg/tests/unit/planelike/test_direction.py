"""Tests for rational directions and their period lattices."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.planelike.direction import parse_omega, rational_basis


class TestRationalBasis:
    """Tests for rational_basis."""

    def test_axis_direction(self) -> None:
        """The vertical direction is periodic along the first axis."""
        direction = rational_basis((0, 1))
        assert direction.period_basis == ((1, 0),)
        assert direction.free_axis() == 1

    def test_diagonal(self) -> None:
        """The diagonal's period vector is orthogonal and primitive."""
        direction = rational_basis((1, 1))
        (k,) = direction.period_basis
        assert k[0] * 1 + k[1] * 1 == 0
        assert math.gcd(*k) == 1
        assert k[direction.pivots()[0]] > 0

    @given(st.lists(st.integers(-4, 4), min_size=2, max_size=3).filter(any))
    def test_basis_spans_orthogonal_lattice(self, omega: list[int]) -> None:
        """det[omega; K] equals |omega|^2 / gcd for a full orthogonal basis."""
        direction = rational_basis(omega)
        rows = np.asarray([omega, *direction.period_basis], dtype=np.float64)
        g = math.gcd(*omega)
        expected = sum(c * c for c in omega) / g
        assert abs(np.linalg.det(rows)) == pytest.approx(expected)
        for k in direction.period_basis:
            assert sum(a * b for a, b in zip(k, omega)) == 0

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=3).filter(any))
    def test_step_vector_rises_by_gcd(self, omega: list[int]) -> None:
        """The unit rise has omega . u = gcd(omega)."""
        step = rational_basis(omega).step_vector()
        assert sum(a * b for a, b in zip(step, omega)) == math.gcd(*omega)

    def test_one_dimensional(self) -> None:
        """A line has no period vectors."""
        direction = rational_basis((3,))
        assert direction.period_basis == ()
        assert direction.free_axis() == 0

    @pytest.mark.parametrize("omega", [(0, 0), (), (1, 0, 0, 1)])
    def test_rejects_bad_vectors(self, omega: tuple[int, ...]) -> None:
        """Zero vectors and dimensions above three are refused."""
        with pytest.raises(GeometryError):
            rational_basis(omega)

    def test_projection(self) -> None:
        """Projection uses the unit normal."""
        direction = rational_basis((3, 4))
        assert direction.projection(np.array([3.0, 4.0])) == pytest.approx(5.0)


class TestParseOmega:
    """Tests for parse_omega."""

    def test_parse(self) -> None:
        """Comma-separated integers are accepted."""
        assert parse_omega("1,-2,3") == (1, -2, 3)

    def test_malformed(self) -> None:
        """Non-integers raise GeometryError."""
        with pytest.raises(GeometryError):
            parse_omega("1,a")
