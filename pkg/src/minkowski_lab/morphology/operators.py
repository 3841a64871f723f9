"""Dilation, erosion and oscillation by the closed ball B_r."""

from __future__ import annotations

import math

import numpy as np

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.grid.geometry import ExtensionRule, ExtensionVariant
from minkowski_lab.grid.mask import BinaryMask, BoolArray
from minkowski_lab.grid.stencil import lattice_radius_sq
from minkowski_lab.morphology.distance import padded_sq_distances


def _grown_extension(rule: ExtensionRule, r: float) -> ExtensionRule:
    """Exterior rule of the dilated set."""
    if rule.variant != ExtensionVariant.HALF_SPACE:
        return rule
    assert rule.normal is not None
    shift = r * math.sqrt(sum(c * c for c in rule.normal))
    offset = rule.offset - shift if rule.negate else rule.offset + shift
    return ExtensionRule(
        variant=rule.variant, normal=rule.normal, offset=offset, negate=rule.negate
    )


def dilation_bits(mask: BinaryMask, r: float) -> BoolArray:
    """Stored cells within distance r of a set cell (extension-aware)."""
    if r < 0:
        raise GeometryError(f"dilation radius must be >= 0, got {r}", field="r")
    radius_sq = lattice_radius_sq(r, mask.geometry.spacing)
    pad = math.isqrt(radius_sq) + 1
    sq = padded_sq_distances(mask, (pad,) * mask.geometry.dim)
    if sq is None:
        return np.zeros(mask.geometry.shape, dtype=bool)
    return sq <= radius_sq


def dilate(mask: BinaryMask, r: float) -> BinaryMask:
    """E dilated by B_r: cells whose closed r-ball meets a set cell.

    Args:
        mask: Input set
        r: Radius, >= 0

    Returns:
        Dilated mask; an empty input yields an empty output
    """
    bits = dilation_bits(mask, r)
    return BinaryMask(mask.geometry, bits, _grown_extension(mask.extension, r))


def erode(mask: BinaryMask, r: float) -> BinaryMask:
    """E eroded by B_r: cells whose whole closed r-ball lies in the set."""
    return dilate(mask.complement(), r).complement()


def oscillation_bits(mask: BinaryMask, r: float) -> BoolArray:
    """Cells whose r-ball meets both the set and its complement."""
    if r <= 0:
        raise GeometryError(f"oscillation radius must be > 0, got {r}", field="r")
    return dilation_bits(mask, r) & dilation_bits(mask.complement(), r)


def oscillation_field(mask: BinaryMask, r: float) -> BinaryMask:
    """The discrete carrier of the r-neighbourhood of the boundary.

    Equals dilate(E, r) intersected with dilate(complement E, r). Its
    exterior is periodic for periodic inputs and empty otherwise.
    """
    bits = oscillation_bits(mask, r)
    rule = (
        ExtensionRule.periodic()
        if mask.extension.variant == ExtensionVariant.PERIODIC
        else ExtensionRule.constant_outside()
    )
    return BinaryMask(mask.geometry, bits, rule)
