"""Tests for BinaryMask and ScalarField."""

import numpy as np
import pytest

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, FieldExtension, ScalarField


def _mask(geom: GridGeometry, rule: ExtensionRule) -> BinaryMask:
    bits = np.zeros(geom.shape, dtype=bool)
    bits[0, :] = True
    bits[2, 3] = True
    return BinaryMask(geom, bits, rule)


class TestBinaryMaskLookup:
    """Tests for total membership queries."""

    def test_stored_cells(self, unit_geometry: GridGeometry) -> None:
        """Stored indices read the stored bits."""
        mask = _mask(unit_geometry, ExtensionRule.constant_outside())
        np.testing.assert_array_equal(
            mask.lookup(np.array([[0, 5], [2, 3], [2, 4]])), [True, True, False]
        )

    def test_constant_exteriors(self, unit_geometry: GridGeometry) -> None:
        """Constant rules answer every exterior query the same way."""
        outside = _mask(unit_geometry, ExtensionRule.constant_outside())
        inside = _mask(unit_geometry, ExtensionRule.constant_inside())
        far = np.array([[-5, 0], [40, 40]])
        assert not outside.lookup(far).any()
        assert inside.lookup(far).all()

    def test_half_space_exterior(self, unit_geometry: GridGeometry) -> None:
        """Half-space exterior cells are set iff normal . center <= offset."""
        mask = _mask(unit_geometry, ExtensionRule.half_space((1, 0), 0.0))
        np.testing.assert_array_equal(
            mask.lookup(np.array([[-1, 5], [12, 5]])), [True, False]
        )

    def test_periodic_exterior(self, unit_geometry: GridGeometry) -> None:
        """Periodic exterior wraps indices into the stored window."""
        mask = _mask(unit_geometry, ExtensionRule.periodic())
        np.testing.assert_array_equal(mask.lookup(np.array([[12, 7], [14, 3]])), [True, True])

    def test_mirror_exterior(self, unit_geometry: GridGeometry) -> None:
        """Mirror exterior reflects -1 onto 0."""
        mask = _mask(unit_geometry, ExtensionRule.mirror())
        np.testing.assert_array_equal(mask.lookup(np.array([[-1, 4], [-2, 4]])), [True, False])

    def test_negated_rule(self, unit_geometry: GridGeometry) -> None:
        """The complement answers the opposite on exterior cells."""
        mask = _mask(unit_geometry, ExtensionRule.half_space((1, 0), 0.0)).complement()
        np.testing.assert_array_equal(
            mask.lookup(np.array([[-1, 5], [12, 5]])), [False, True]
        )

    def test_padded_frame(self, unit_geometry: GridGeometry) -> None:
        """Padding grows the window by the pad on every side."""
        mask = _mask(unit_geometry, ExtensionRule.constant_inside())
        frame = mask.padded(2)
        assert frame.shape == (16, 16)
        assert frame[0, 0]
        assert frame[2, 2]
        assert not frame[3, 3]


class TestBinaryMaskOperations:
    """Tests for set operations."""

    def test_bits_are_read_only(self, unit_geometry: GridGeometry) -> None:
        """Stored bits cannot be mutated in place."""
        mask = BinaryMask.empty(unit_geometry)
        with pytest.raises(ValueError):
            mask.bits[0, 0] = True

    def test_shape_mismatch_rejected(self, unit_geometry: GridGeometry) -> None:
        """Bits must match the geometry shape."""
        with pytest.raises(GeometryError):
            BinaryMask(
                unit_geometry, np.zeros((3, 3), dtype=bool), ExtensionRule.constant_outside()
            )

    def test_double_complement(self, random_mask_pair: tuple[BinaryMask, BinaryMask]) -> None:
        """Complementing twice is the identity."""
        a, _ = random_mask_pair
        assert a.complement().complement().same_as(a)

    def test_union_and_intersection(self, random_mask_pair: tuple[BinaryMask, BinaryMask]) -> None:
        """Union and intersection act cellwise."""
        a, b = random_mask_pair
        np.testing.assert_array_equal(a.union(b).bits, a.bits | b.bits)
        np.testing.assert_array_equal(a.intersection(b).bits, a.bits & b.bits)
        assert a.intersection(b).issubset(a)
        assert a.issubset(a.union(b))

    def test_incompatible_exteriors_rejected(self, unit_geometry: GridGeometry) -> None:
        """Masks with different exterior rules cannot be combined."""
        a = BinaryMask.empty(unit_geometry)
        b = BinaryMask.full(unit_geometry)
        with pytest.raises(GeometryError):
            a.union(b)

    def test_incompatible_geometries_rejected(self, unit_geometry: GridGeometry) -> None:
        """Masks on different lattices cannot be combined."""
        other = GridGeometry(dim=2, shape=(12, 12), spacing=0.5)
        with pytest.raises(GeometryError):
            BinaryMask.empty(unit_geometry).intersection(BinaryMask.empty(other))

    def test_periodic_shift_by_period_is_identity(self) -> None:
        """Shifting by a period vector of a sheared grid fixes the mask."""
        geom = GridGeometry(
            dim=2,
            shape=(4, 6),
            spacing=1.0,
            periodic_axes=(True, True),
            shear=((0, 2), (0, 0)),
        )
        bits = np.random.default_rng(3).random(geom.shape) < 0.5
        mask = BinaryMask(geom, bits, ExtensionRule.periodic())
        for vector in geom.period_vectors():
            assert mask.shift(vector).same_as(mask)

    def test_bounded_shift_reads_exterior(self, unit_geometry: GridGeometry) -> None:
        """Shifting a bounded mask fills vacated cells from the exterior."""
        mask = BinaryMask.full(unit_geometry)
        assert mask.shift((3, 0)).bits.all()
        assert BinaryMask.empty(unit_geometry).shift((3, 0)).count == 0

    def test_count(self, unit_geometry: GridGeometry) -> None:
        """Count is the number of set stored cells."""
        assert _mask(unit_geometry, ExtensionRule.constant_outside()).count == 13


class TestScalarField:
    """Tests for ScalarField."""

    def test_non_finite_rejected(self, unit_geometry: GridGeometry) -> None:
        """Fields must be finite everywhere."""
        values = np.zeros(unit_geometry.shape)
        values[1, 1] = np.nan
        with pytest.raises(GeometryError):
            ScalarField(unit_geometry, values)

    def test_indicator(self, unit_geometry: GridGeometry) -> None:
        """Indicator takes the value on the set and zero elsewhere."""
        mask = _mask(unit_geometry, ExtensionRule.constant_outside())
        field = ScalarField.indicator(mask, -2.5)
        assert field.values[2, 3] == -2.5
        assert field.values[5, 5] == 0.0

    def test_levels_include_exterior_zero(self, unit_geometry: GridGeometry) -> None:
        """A zero exterior contributes the level 0."""
        field = ScalarField.constant(unit_geometry, 3.0)
        np.testing.assert_array_equal(field.levels(), [0.0, 3.0])
        periodic = ScalarField(unit_geometry, field.values, FieldExtension.PERIODIC)
        np.testing.assert_array_equal(periodic.levels(), [3.0])

    def test_superlevel_is_strict(self, unit_geometry: GridGeometry) -> None:
        """The superlevel set {u > t} excludes cells equal to t."""
        values = np.zeros(unit_geometry.shape)
        values[0, 0] = 1.0
        values[0, 1] = 2.0
        field = ScalarField(unit_geometry, values)
        assert field.superlevel(1.0).count == 1
        assert field.superlevel(0.5).count == 2

    def test_superlevel_exterior(self, unit_geometry: GridGeometry) -> None:
        """Below zero the zero exterior belongs to the superlevel set."""
        field = ScalarField.zeros(unit_geometry)
        assert field.superlevel(-1.0).extension.is_constant() is True
        assert field.superlevel(0.0).extension.is_constant() is False
