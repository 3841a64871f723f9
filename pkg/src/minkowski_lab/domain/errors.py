"""Exception hierarchy for the laboratory.

All errors inherit from LabError, so callers can catch the whole family
when they only need to distinguish "bad input" from "bug". Each error
carries structured context for logging.

Error categories:
- GeometryError: invalid lattice, window, shape or mask combination
- EmptySetError: distance queries against an empty extended set
- StencilTooLargeError / CubeTooSmallError: resolution limits
- SpecificationError: Dirichlet or strip problem invariants violated
- CapacityOverflowError / TooLargeError: solver and oracle size limits
- CertificateError: solver output disagrees with direct evaluation
- ConfigurationError / SerializationError: configuration and file formats
"""

from __future__ import annotations

from typing import Any


class LabError(Exception):
    """Base exception for all laboratory errors."""

    def __init__(self, message: str, context: dict[str, Any] | None = None) -> None:
        """Initialize with message and optional context.

        Args:
            message: Human-readable error description
            context: Additional structured data for logging/debugging
        """
        super().__init__(message)
        self.context = context or {}


class GeometryError(LabError):
    """Invalid geometry, window, shape, or incompatible masks.

    Raised when:
    - A shape entry is below one or the spacing is not positive
    - Two masks live on different geometries or extensions
    - A rasterized shape is degenerate (negative radius, zero normal)
    """

    def __init__(
        self,
        message: str,
        field: str | None = None,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with message and offending field.

        Args:
            message: Human-readable error description
            field: Name of the offending parameter
            context: Additional structured data
        """
        super().__init__(message, context)
        self.field = field


class EmptySetError(LabError):
    """No cell of the extended set is set, so distances are undefined."""


class StencilTooLargeError(LabError):
    """Requested ball stencil exceeds the configured r/h cap."""

    def __init__(
        self,
        ratio: float,
        cap: float,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with the requested ratio and the cap.

        Args:
            ratio: Requested r/h
            cap: Configured maximum r/h
            context: Additional structured data
        """
        super().__init__(f"Stencil ratio r/h={ratio:g} exceeds cap {cap:g}", context)
        self.ratio = ratio
        self.cap = cap


class CubeTooSmallError(LabError):
    """Cube-hull side rounds below one lattice cell."""

    def __init__(
        self,
        r: float,
        spacing: float,
        dim: int,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with the radius and lattice data.

        Args:
            r: Requested radius
            spacing: Lattice spacing h
            dim: Lattice dimension
            context: Additional structured data
        """
        super().__init__(
            f"Cube hull needs r > 4*sqrt(n)*h, got r={r:g}, h={spacing:g}, n={dim}",
            context,
        )
        self.r = r
        self.spacing = spacing
        self.dim = dim


class SpecificationError(LabError):
    """A Dirichlet or strip problem violates its construction invariants."""

    def __init__(
        self,
        message: str,
        field: str | None = None,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with message and offending field.

        Args:
            message: Human-readable error description
            field: Name of the offending field
            context: Additional structured data
        """
        super().__init__(message, context)
        self.field = field


class CapacityOverflowError(LabError):
    """Total scaled capacity does not fit the max-flow integer range."""

    def __init__(
        self,
        total: int,
        limit: int,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with the offending total.

        Args:
            total: Sum of finite capacities plus the infinity sentinel
            limit: Largest representable capacity
            context: Additional structured data
        """
        super().__init__(
            f"Scaled capacity {total} exceeds limit {limit}; lower capacity_scale",
            context,
        )
        self.total = total
        self.limit = limit


class TooLargeError(LabError):
    """Brute-force enumeration requested above its free-cell cap."""

    def __init__(
        self,
        free_cells: int,
        cap: int,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with the free-cell count and the cap.

        Args:
            free_cells: Number of free cells in the problem
            cap: Largest enumerable free-cell count
            context: Additional structured data
        """
        super().__init__(f"{free_cells} free cells exceeds oracle cap {cap}", context)
        self.free_cells = free_cells
        self.cap = cap


class CertificateError(LabError):
    """Cut value plus offset disagrees with direct energy evaluation."""

    def __init__(
        self,
        cut_energy: int,
        evaluated_energy: int,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with both scaled energies.

        Args:
            cut_energy: Energy decoded from the flow value
            evaluated_energy: Energy of the decoded mask, evaluated directly
            context: Additional structured data
        """
        super().__init__(
            f"Cut energy {cut_energy} != evaluated energy {evaluated_energy}",
            context,
        )
        self.cut_energy = cut_energy
        self.evaluated_energy = evaluated_energy


class ConfigurationError(LabError):
    """Invalid configuration.

    Raised when:
    - Required configuration is missing
    - Configuration values are out of range
    - The configuration file cannot be parsed
    """

    def __init__(
        self,
        message: str,
        field: str | None = None,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with message and config field.

        Args:
            message: Human-readable error description
            field: The configuration field that is invalid
            context: Additional structured data
        """
        super().__init__(message, context)
        self.field = field


class SerializationError(LabError):
    """Malformed mask, field, sidecar, or problem file."""

    def __init__(
        self,
        message: str,
        path: str | None = None,
        context: dict[str, Any] | None = None,
    ) -> None:
        """Initialize with message and file path.

        Args:
            message: Human-readable error description
            path: File that failed to parse
            context: Additional structured data
        """
        super().__init__(message, context)
        self.path = path
