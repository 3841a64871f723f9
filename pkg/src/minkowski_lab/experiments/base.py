"""Abstract base class for experiments.

Every experiment owns a frozen parameter model and produces one Report.
"""

from __future__ import annotations

import logging
import time
from abc import ABC, abstractmethod
from typing import ClassVar

from pydantic import BaseModel, ConfigDict

from minkowski_lab.experiments.types import Report

logger = logging.getLogger(__name__)


class ExperimentParams(BaseModel):
    """Base for experiment parameter blocks; unknown keys are rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = 0


class Experiment(ABC):
    """A seeded, self-contained numerical check that emits a Report."""

    name: ClassVar[str]

    def __init__(self, params: ExperimentParams) -> None:
        self.params = params

    @abstractmethod
    def run(self) -> Report:
        """Run the experiment and return its report."""

    def execute(self) -> Report:
        """Run, then log one line per verdict."""
        started = time.perf_counter()
        report = self.run()
        for verdict in report.verdicts:
            logger.info(
                "Verdict",
                extra={
                    "experiment": report.name,
                    "check": verdict.name,
                    "passed": verdict.passed,
                    "value": verdict.value,
                    "tolerance": verdict.tolerance,
                },
            )
        logger.info(
            "Experiment finished",
            extra={
                "experiment": report.name,
                "passed": report.passed,
                "seconds": round(time.perf_counter() - started, 3),
            },
        )
        return report
