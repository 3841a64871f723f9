"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest

from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.shapes import BallShape, rasterize
from minkowski_lab.grid.window import Window


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every randomized test is reproducible."""
    return np.random.default_rng(12345)


@pytest.fixture
def unit_geometry() -> GridGeometry:
    """2D lattice with spacing 1 on a 12x12 box at the origin."""
    return GridGeometry(dim=2, shape=(12, 12), spacing=1.0)


@pytest.fixture
def disk_geometry() -> GridGeometry:
    """2D lattice covering [-3, 3]^2 at h = 0.05."""
    return GridGeometry.box((-3.0, -3.0), (3.0, 3.0), 0.05)


@pytest.fixture
def disk(disk_geometry: GridGeometry) -> BinaryMask:
    """Disk of radius 2 centered at the origin."""
    return rasterize(BallShape(center=(0.0, 0.0), radius=2.0), disk_geometry)


@pytest.fixture
def full_window(unit_geometry: GridGeometry) -> Window:
    """Whole stored window of the unit lattice."""
    return Window.full(unit_geometry)


@pytest.fixture
def random_mask_pair(
    unit_geometry: GridGeometry, rng: np.random.Generator
) -> tuple[BinaryMask, BinaryMask]:
    """Two random masks on the unit lattice with an empty exterior."""
    rule = ExtensionRule.constant_outside()
    a = BinaryMask(unit_geometry, rng.random(unit_geometry.shape) < 0.5, rule)
    b = BinaryMask(unit_geometry, rng.random(unit_geometry.shape) < 0.5, rule)
    return a, b
