"""Experiment registry and factory.

Experiments are selected by name from configuration; each name maps to a
parameter model and an Experiment class.
"""

from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import ValidationError
from pydantic.dataclasses import dataclass

from minkowski_lab.domain.errors import ConfigurationError
from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.density import DensityExperiment, DensityParams
from minkowski_lab.experiments.failcom import FailcomExperiment, FailcomParams
from minkowski_lab.experiments.gamma import GammaExperiment, GammaParams
from minkowski_lab.experiments.isoperimetry import (
    IsoperimetricExperiment,
    IsoperimetricParams,
    RelativeIsoperimetricExperiment,
    RelativeIsoperimetricParams,
)
from minkowski_lab.experiments.oned import OnedExperiment, OnedParams
from minkowski_lab.experiments.planelike_sweep import PlanelikeSweepExperiment, PlanelikeSweepParams
from minkowski_lab.experiments.poincare import PoincareExperiment, PoincareParams
from minkowski_lab.experiments.selftest import SelftestExperiment, SelftestParams


class ExperimentType(str, Enum):
    """Registered experiments."""

    ISOPERIMETRIC = "isoperimetric"
    RELATIVE_ISOPERIMETRIC = "relative_isoperimetric"
    POINCARE = "poincare"
    DENSITY = "density"
    FAILCOM = "failcom"
    GAMMA = "gamma"
    ONED = "oned"
    PLANELIKE = "planelike"
    SELFTEST = "selftest"


_registry: dict[ExperimentType, tuple[type[ExperimentParams], type[Experiment]]] = {}


def register_experiment(
    experiment_type: ExperimentType,
    params_type: type[ExperimentParams],
    experiment: type[Experiment],
) -> None:
    """Register the parameter model and class for an experiment name."""
    _registry[experiment_type] = (params_type, experiment)


register_experiment(ExperimentType.ISOPERIMETRIC, IsoperimetricParams, IsoperimetricExperiment)
register_experiment(
    ExperimentType.RELATIVE_ISOPERIMETRIC,
    RelativeIsoperimetricParams,
    RelativeIsoperimetricExperiment,
)
register_experiment(ExperimentType.POINCARE, PoincareParams, PoincareExperiment)
register_experiment(ExperimentType.DENSITY, DensityParams, DensityExperiment)
register_experiment(ExperimentType.FAILCOM, FailcomParams, FailcomExperiment)
register_experiment(ExperimentType.GAMMA, GammaParams, GammaExperiment)
register_experiment(ExperimentType.ONED, OnedParams, OnedExperiment)
register_experiment(ExperimentType.PLANELIKE, PlanelikeSweepParams, PlanelikeSweepExperiment)
register_experiment(ExperimentType.SELFTEST, SelftestParams, SelftestExperiment)


@dataclass
class ExperimentConfig:
    """Which experiment to run and its parameter overrides."""

    experiment_type: ExperimentType
    params: dict[str, Any] | None = None

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        """Create config from ``{"type": name, "params": {...}}``.

        Raises:
            ConfigurationError: If the experiment name is unknown
        """
        name = data.get("type", "")
        try:
            experiment_type = ExperimentType(name)
        except ValueError as err:
            raise ConfigurationError(f"Unknown experiment type: {name}", field="type") from err
        return cls(experiment_type=experiment_type, params=data.get("params"))


def params_type(experiment_type: ExperimentType) -> type[ExperimentParams]:
    """Parameter model registered for an experiment."""
    entry = _registry.get(experiment_type)
    if entry is None:
        raise ConfigurationError(
            f"No experiment registered for type: {experiment_type.value}", field="type"
        )
    return entry[0]


def create_experiment(config: ExperimentConfig) -> Experiment:
    """Create an experiment from configuration.

    Args:
        config: Experiment name and parameter overrides

    Returns:
        Experiment ready to run

    Raises:
        ConfigurationError: If the name is unregistered or the parameters are invalid
    """
    model = params_type(config.experiment_type)
    _, experiment = _registry[config.experiment_type]
    try:
        params = model.model_validate(config.params or {})
    except ValidationError as err:
        first = err.errors()[0]
        field = ".".join(str(p) for p in first.get("loc", ())) or None
        raise ConfigurationError(
            f"Invalid parameters for {config.experiment_type.value}: {first.get('msg')}",
            field=field,
        ) from err
    return experiment(params)
