"""Configuration models for the laboratory.

Loads and validates configuration from YAML or JSON files using pydantic.
Environment variables (prefix ``MINKOWSKI_LAB_``, ``__`` between nested
keys) sit below file values; command-line flags are applied last by the
caller.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from minkowski_lab.domain.errors import ConfigurationError
from minkowski_lab.experiments.density import DensityParams
from minkowski_lab.experiments.failcom import FailcomParams
from minkowski_lab.experiments.gamma import GammaParams
from minkowski_lab.experiments.isoperimetry import IsoperimetricParams, RelativeIsoperimetricParams
from minkowski_lab.experiments.oned import OnedParams
from minkowski_lab.experiments.planelike_sweep import PlanelikeSweepParams
from minkowski_lab.experiments.poincare import PoincareParams
from minkowski_lab.experiments.selftest import SelftestParams
from minkowski_lab.grid.io import atomic_write_text
from minkowski_lab.grid.stencil import DEFAULT_STENCIL_CAP
from minkowski_lab.planelike.strip import PeriodicForcing
from minkowski_lab.solver.brute_force import DEFAULT_ORACLE_CAP
from minkowski_lab.solver.graph import Encoding
from minkowski_lab.solver.spec import DEFAULT_CAPACITY_SCALE


class GridConfig(BaseModel):
    """Lattice limits."""

    stencil_cap: float = Field(default=DEFAULT_STENCIL_CAP, gt=0)


class SolverConfig(BaseModel):
    """Min-cut solver settings."""

    capacity_scale: int = Field(default=DEFAULT_CAPACITY_SCALE, ge=1)
    oracle_cap: int = Field(default=DEFAULT_ORACLE_CAP, ge=1, le=24)
    encoding: Encoding = Encoding.INTERVAL


class PlanelikeConfig(BaseModel):
    """Defaults for strip problems."""

    eta: float = Field(default=0.05, ge=0, le=0.25)
    M: float = Field(default=8.0, ge=2)
    spacing_ratio: int = Field(default=5, ge=1)
    forcing: PeriodicForcing = PeriodicForcing.CHECKERBOARD


class ExperimentsConfig(BaseModel):
    """Parameter blocks for every experiment plus run-wide settings."""

    seed: int = 0
    jobs: int = Field(default=1, ge=1)
    isoperimetric: IsoperimetricParams = Field(default_factory=IsoperimetricParams)
    relative_isoperimetric: RelativeIsoperimetricParams = Field(
        default_factory=RelativeIsoperimetricParams
    )
    poincare: PoincareParams = Field(default_factory=PoincareParams)
    density: DensityParams = Field(default_factory=DensityParams)
    failcom: FailcomParams = Field(default_factory=FailcomParams)
    gamma: GammaParams = Field(default_factory=GammaParams)
    oned: OnedParams = Field(default_factory=OnedParams)
    planelike: PlanelikeSweepParams = Field(default_factory=PlanelikeSweepParams)
    selftest: SelftestParams = Field(default_factory=SelftestParams)

    def params_for(self, name: str) -> dict[str, Any]:
        """Parameter dict of one experiment with the run-wide seed applied."""
        block = getattr(self, name, None)
        if not isinstance(block, BaseModel):
            raise ConfigurationError(f"Unknown experiment type: {name}", field="experiments")
        data = block.model_dump()
        data["seed"] = self.seed
        return data


class LabConfig(BaseSettings):
    """Root configuration for the laboratory."""

    model_config = SettingsConfigDict(
        env_prefix="MINKOWSKI_LAB_",
        env_nested_delimiter="__",
        extra="forbid",
    )

    grid: GridConfig = Field(default_factory=GridConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    planelike: PlanelikeConfig = Field(default_factory=PlanelikeConfig)
    experiments: ExperimentsConfig = Field(default_factory=ExperimentsConfig)

    # Logging
    log_level: str = "INFO"
    log_file: str | None = None
    log_json: bool = False

    @classmethod
    def from_file(cls, path: str | Path) -> LabConfig:
        """Load configuration from a YAML or JSON file.

        Args:
            path: Path to a ``.yaml``, ``.yml`` or ``.json`` file

        Returns:
            Validated LabConfig

        Raises:
            ConfigurationError: If the file is missing, unparsable or invalid
        """
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"Config file not found: {path}", field="config")
        if path.suffix not in (".yaml", ".yml", ".json"):
            raise ConfigurationError(
                f"Config file must be .yaml, .yml or .json, got {path.suffix!r}", field="config"
            )
        try:
            with open(path) as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Cannot parse {path}: {e}", field="config") from e
        if data is not None and not isinstance(data, dict):
            raise ConfigurationError(f"{path} must hold a mapping", field="config")
        return cls.from_dict(data or {})

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LabConfig:
        """Load configuration from a dictionary.

        Raises:
            ConfigurationError: If a value is invalid; ``field`` names its dotted path
        """
        try:
            return cls(**data)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(p) for p in first.get("loc", ())) or None
            raise ConfigurationError(
                f"Invalid configuration: {first.get('msg')}", field=field
            ) from e

    def to_file(self, path: str | Path) -> None:
        """Save configuration as YAML (or JSON for a ``.json`` path)."""
        path = Path(path)
        data = self.model_dump(mode="json")
        if path.suffix == ".json":
            atomic_write_text(path, json.dumps(data, sort_keys=True, indent=2) + "\n")
        else:
            atomic_write_text(path, yaml.safe_dump(data, default_flow_style=False, sort_keys=True))


def load_config(path: str | Path | None = None) -> LabConfig:
    """Load laboratory configuration.

    Looks for config in the following order:
    1. Provided path argument
    2. ./config/lab.yaml
    3. ./config/lab.json
    4. ./lab.yaml
    5. Defaults (environment variables still apply)

    Args:
        path: Optional explicit path to config file

    Returns:
        Validated LabConfig
    """
    if path:
        return LabConfig.from_file(path)

    default_paths = [
        Path("./config/lab.yaml"),
        Path("./config/lab.json"),
        Path("./lab.yaml"),
    ]

    for default_path in default_paths:
        if default_path.exists():
            return LabConfig.from_file(default_path)

    return LabConfig.from_dict({})
