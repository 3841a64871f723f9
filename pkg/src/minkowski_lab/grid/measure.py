"""Volumes and closed-form reference values."""

from __future__ import annotations

import math

import numpy as np

from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window


def volume(mask: BinaryMask, window: Window | None = None) -> float:
    """Number of set cells in the window times h^n.

    Args:
        mask: The set
        window: Cell subset of the stored window; the whole window if None
    """
    bits = mask.bits if window is None else mask.bits & window.cells
    return int(np.count_nonzero(bits)) * mask.geometry.cell_volume


def unit_ball_volume(n: int) -> float:
    """omega_n = pi^(n/2) / Gamma(n/2 + 1)."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def ball_volume(n: int, radius: float) -> float:
    return unit_ball_volume(n) * max(radius, 0.0) ** n


def ball_perimeter_r(n: int, radius: float, r: float) -> float:
    """Continuum Per_r of B_R: |B_{R+r} minus B_{(R-r)+}| / 2r."""
    return (ball_volume(n, radius + r) - ball_volume(n, radius - r)) / (2 * r)


def class_a_bound(n: int, radius: float, r: float) -> float:
    """Upper bound (omega_n / 2r)(R^n - (R-2r)^n) for minimizers in B_R."""
    return unit_ball_volume(n) / (2 * r) * (radius**n - max(radius - 2 * r, 0.0) ** n)


def annulus_energy(n: int, r: float, k: float) -> float:
    """Energy of B_r minus B_{r/2} under bulk term -K on the annulus."""
    omega = unit_ball_volume(n)
    return 2 ** (n - 1) * omega * r ** (n - 1) - omega * (1 - 2.0**-n) * k * r**n
