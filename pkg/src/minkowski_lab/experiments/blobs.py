"""Seeded random connected blobs with an exact cell count."""

from __future__ import annotations

import heapq

import numpy as np
from scipy import ndimage

from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, FloatArray


def blob_priority(
    geometry: GridGeometry,
    rng: np.random.Generator,
    radius: float,
    smoothing: float = 0.3,
    bias: float = 1.0,
) -> FloatArray:
    """Smoothed lattice noise pulled toward the window center.

    Args:
        geometry: Target lattice
        rng: Random generator
        radius: Scale of the radial bias (length units)
        smoothing: Gaussian width as a fraction of ``radius``
        bias: Weight of the radial term against unit-variance noise
    """
    noise = rng.standard_normal(geometry.shape)
    sigma = max(smoothing * radius / geometry.spacing, 1.0)
    smooth = ndimage.gaussian_filter(noise, sigma=sigma, mode="nearest")
    spread = float(smooth.std())
    if spread > 0:
        smooth = smooth / spread
    centers = geometry.center_grid()
    middle = centers.reshape(-1, geometry.dim).mean(axis=0)
    d2 = ((centers - middle) ** 2).sum(axis=-1) / radius**2
    return smooth - bias * d2


def grow_region(
    priority: FloatArray, cell_count: int, allowed: np.ndarray | None = None
) -> np.ndarray:
    """Grow a face-connected region from the top cell, best neighbor first.

    Cells outside ``allowed`` are never added. Ties break on flat index, so
    the result depends only on the inputs.
    """
    shape = priority.shape
    total = priority.size
    if cell_count >= total:
        return np.ones(shape, dtype=bool)
    flat = priority.ravel()
    permitted = np.ones(total, dtype=bool) if allowed is None else allowed.ravel()
    region = np.zeros(total, dtype=bool)
    queued = np.zeros(total, dtype=bool)
    start = int(np.argmax(np.where(permitted, flat, -np.inf)))
    heap: list[tuple[float, int]] = [(-float(flat[start]), start)]
    queued[start] = True
    grown = 0
    strides = [int(np.prod(shape[i + 1 :])) for i in range(len(shape))]
    while heap and grown < cell_count:
        _, cell = heapq.heappop(heap)
        region[cell] = True
        grown += 1
        coords = np.unravel_index(cell, shape)
        for axis, size in enumerate(shape):
            for step in (-1, 1):
                c = coords[axis] + step
                if 0 <= c < size:
                    nb = cell + step * strides[axis]
                    if permitted[nb] and not queued[nb]:
                        queued[nb] = True
                        heapq.heappush(heap, (-float(flat[nb]), nb))
    return region.reshape(shape)


def random_blob(
    geometry: GridGeometry,
    cell_count: int,
    rng: np.random.Generator,
    radius: float,
    smoothing: float = 0.3,
    bias: float = 1.0,
    margin: float = 0.0,
) -> BinaryMask:
    """Connected random set with exactly ``cell_count`` cells.

    No set cell lies within ``margin`` of the stored box boundary, so an
    r-neighbourhood with r < margin stays inside the window.
    """
    priority = blob_priority(geometry, rng, radius, smoothing, bias)
    centers = geometry.center_grid()
    lo = np.asarray(geometry.origin)
    hi = lo + np.asarray(geometry.shape) * geometry.spacing
    allowed = np.all((centers - lo > margin) & (hi - centers > margin), axis=-1)
    bits = grow_region(priority, cell_count, allowed)
    return BinaryMask(geometry, bits, ExtensionRule.constant_outside())


def hole_count(mask: BinaryMask) -> int:
    """Bounded components of the complement (face connectivity)."""
    padded = np.pad(~mask.bits, 1, constant_values=True)
    _, components = ndimage.label(padded)
    return max(int(components) - 1, 0)


def centroid(mask: BinaryMask) -> np.ndarray:
    """Mean center of the set cells."""
    return mask.geometry.centers(np.argwhere(mask.bits)).mean(axis=0)
