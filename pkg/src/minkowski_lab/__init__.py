"""Grid laboratory for nonlocal Minkowski perimeters and their minimizers."""

__version__ = "0.1.0"
