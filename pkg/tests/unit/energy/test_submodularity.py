"""Tests for the submodularity slack of Per_r."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from minkowski_lab.energy.submodularity import submodularity_slack, submodularity_slack_count
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window

GEOMETRY = GridGeometry(dim=2, shape=(10, 10), spacing=1.0)
WINDOW = Window.full(GEOMETRY)

bit_arrays = st.lists(st.booleans(), min_size=100, max_size=100).map(
    lambda values: np.array(values).reshape(10, 10)
)


class TestSubmodularity:
    """Tests for submodularity_slack."""

    @given(a=bit_arrays, b=bit_arrays, r=st.sampled_from([1.0, 1.5, 3.0]))
    @settings(max_examples=80, deadline=None)
    def test_slack_nonnegative(self, a: np.ndarray, b: np.ndarray, r: float) -> None:
        """Per_r(A) + Per_r(B) >= Per_r(A and B) + Per_r(A or B)."""
        rule = ExtensionRule.constant_outside()
        slack = submodularity_slack_count(
            BinaryMask(GEOMETRY, a, rule), BinaryMask(GEOMETRY, b, rule), WINDOW, r
        )
        assert slack >= 0

    def test_nested_sets_have_zero_slack(self, rng: np.random.Generator) -> None:
        """When A is inside B the inequality is an equality."""
        rule = ExtensionRule.constant_outside()
        b_bits = rng.random(GEOMETRY.shape) < 0.6
        a_bits = b_bits & (rng.random(GEOMETRY.shape) < 0.5)
        a = BinaryMask(GEOMETRY, a_bits, rule)
        b = BinaryMask(GEOMETRY, b_bits, rule)
        assert submodularity_slack(a, b, WINDOW, 2.0) == 0.0

    def test_half_space_exteriors(self, rng: np.random.Generator) -> None:
        """Slack stays nonnegative with a shared non-constant exterior."""
        rule = ExtensionRule.half_space((1, 1), 5.0)
        a = BinaryMask(GEOMETRY, rng.random(GEOMETRY.shape) < 0.5, rule)
        b = BinaryMask(GEOMETRY, rng.random(GEOMETRY.shape) < 0.5, rule)
        assert submodularity_slack(a, b, WINDOW, 1.5) >= 0.0
