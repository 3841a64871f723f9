"""Domain-level definitions shared across the package."""

from minkowski_lab.domain.errors import (
    CapacityOverflowError,
    CertificateError,
    ConfigurationError,
    CubeTooSmallError,
    EmptySetError,
    GeometryError,
    LabError,
    SerializationError,
    SpecificationError,
    StencilTooLargeError,
    TooLargeError,
)

__all__ = [
    "CapacityOverflowError",
    "CertificateError",
    "ConfigurationError",
    "CubeTooSmallError",
    "EmptySetError",
    "GeometryError",
    "LabError",
    "SerializationError",
    "SpecificationError",
    "StencilTooLargeError",
    "TooLargeError",
]
