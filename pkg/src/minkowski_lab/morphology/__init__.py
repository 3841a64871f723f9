"""Distance transforms and ball morphology."""

from minkowski_lab.morphology.cube_hull import CubeHull, cube_hull
from minkowski_lab.morphology.distance import DistanceField, distance_transform
from minkowski_lab.morphology.operators import dilate, erode, oscillation_field

__all__ = [
    "CubeHull",
    "DistanceField",
    "cube_hull",
    "dilate",
    "distance_transform",
    "erode",
    "oscillation_field",
]
