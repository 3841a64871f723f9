"""Application configuration."""

from minkowski_lab.core.config import LabConfig, load_config

__all__ = [
    "LabConfig",
    "load_config",
]
