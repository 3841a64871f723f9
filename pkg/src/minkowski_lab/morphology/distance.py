"""Exact squared Euclidean distance transforms that respect exterior rules.

The stored window is materialized inside a padded frame (exterior cells
read through the mask's rule, periodic axes tiled), then scipy's exact
Euclidean transform returns nearest set-cell indices. Squared distances are
recomputed from those indices in integer cell units, so they are exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from minkowski_lab.domain.errors import EmptySetError
from minkowski_lab.grid.geometry import ExtensionVariant, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, BoolArray, frozen_array

logger = logging.getLogger(__name__)

IntArray = NDArray[np.int64]

_MAX_PAD_DOUBLINGS = 8


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Squared distance from each cell center to the nearest set cell center."""

    geometry: GridGeometry
    cells_sq: IntArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells_sq", frozen_array(self.cells_sq))

    @property
    def values(self) -> NDArray[np.float64]:
        """Squared distances in length^2 units."""
        return self.cells_sq * self.geometry.spacing**2


def frame_sq_distances(frame: BoolArray) -> IntArray:
    """Exact integer squared distances to the nearest True cell of a frame.

    The frame must contain at least one True cell.
    """
    indices = ndimage.distance_transform_edt(
        ~frame, return_distances=False, return_indices=True
    )
    grid = np.indices(frame.shape, dtype=np.int64)
    diff = indices.astype(np.int64) - grid
    return (diff**2).sum(axis=0)


def extended_set_nonempty(mask: BinaryMask) -> bool:
    """Whether any cell, stored or exterior, is set."""
    if mask.bits.any():
        return True
    if all(mask.geometry.periodic_axes):
        return False
    rule = mask.extension
    constant = rule.is_constant()
    if constant is not None:
        return constant
    if rule.variant == ExtensionVariant.HALF_SPACE:
        return True
    # periodic and mirror rules replay the stored bits
    return rule.negate


def _default_pads(mask: BinaryMask, pad: int | None) -> tuple[int, ...]:
    geom = mask.geometry
    base = pad if pad is not None else max(geom.shape)
    return tuple(
        size if periodic else base for size, periodic in zip(geom.shape, geom.periodic_axes)
    )


def padded_sq_distances(mask: BinaryMask, pads: tuple[int, ...]) -> IntArray | None:
    """Squared distances on the stored window computed in a padded frame.

    Returns None when the frame holds no set cell.
    """
    frame = mask.padded(pads)
    if not frame.any():
        return None
    sq = frame_sq_distances(frame)
    crop = tuple(slice(p, p + s) for p, s in zip(pads, mask.geometry.shape))
    return sq[crop]


def distance_transform(mask: BinaryMask, pad: int | None = None) -> DistanceField:
    """Exact squared Euclidean distance to the nearest set cell.

    Periodic axes are tiled three times so wrap-around distances are exact.
    Non-periodic axes are padded by ``pad`` cells (default: the largest
    axis length); the padding doubles until the frame meets the set.

    Args:
        mask: Input set with its exterior rule
        pad: Padding for non-periodic axes, in cells

    Returns:
        DistanceField in integer cell units (see ``values`` for length^2)

    Raises:
        EmptySetError: If no cell of the extended set is set
    """
    if not extended_set_nonempty(mask):
        raise EmptySetError("distance transform of an empty set", {"shape": mask.geometry.shape})

    pads = _default_pads(mask, pad)
    for _ in range(_MAX_PAD_DOUBLINGS):
        sq = padded_sq_distances(mask, pads)
        if sq is not None:
            return DistanceField(mask.geometry, sq)
        pads = tuple(
            p if periodic else 2 * p
            for p, periodic in zip(pads, mask.geometry.periodic_axes)
        )
        logger.debug("Distance frame empty, growing padding", extra={"pads": pads})
    raise EmptySetError("no set cell found within the padded frame", {"pads": pads})
