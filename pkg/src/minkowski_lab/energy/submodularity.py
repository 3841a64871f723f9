"""Submodularity slack of Per_r."""

from __future__ import annotations

from minkowski_lab.energy.perimeter import oscillation_count
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window


def submodularity_slack_count(a: BinaryMask, b: BinaryMask, window: Window, r: float) -> int:
    """Integer slack: osc(A) + osc(B) - osc(A and B) - osc(A or B), in cells."""
    return (
        oscillation_count(a, window, r)
        + oscillation_count(b, window, r)
        - oscillation_count(a.intersection(b), window, r)
        - oscillation_count(a.union(b), window, r)
    )


def submodularity_slack(a: BinaryMask, b: BinaryMask, window: Window, r: float) -> float:
    """Per_r(A) + Per_r(B) - Per_r(A and B) - Per_r(A or B) on the window.

    Always >= 0. Raises GeometryError when the masks are incompatible.
    """
    count = submodularity_slack_count(a, b, window, r)
    return count * a.geometry.cell_volume / (2 * r)
