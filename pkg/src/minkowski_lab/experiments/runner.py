"""Concurrent experiment execution with serialized report writing."""

from __future__ import annotations

import logging
import threading
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from minkowski_lab.experiments.factory import ExperimentConfig, create_experiment
from minkowski_lab.experiments.types import Report
from minkowski_lab.grid.io import atomic_write_text

logger = logging.getLogger(__name__)


class ReportWriter:
    """Writes reports into one directory, one file set at a time."""

    def __init__(self, out_dir: str | Path, csv: bool = True) -> None:
        self.out_dir = Path(out_dir)
        self.csv = csv
        self._lock = threading.Lock()

    def write(self, report: Report) -> Path:
        """Write ``<name>.json`` (and ``<name>.csv`` when samples exist)."""
        stem = report.name.replace(":", "_")
        with self._lock:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            path = atomic_write_text(self.out_dir / f"{stem}.json", report.to_json())
            if self.csv and report.samples:
                atomic_write_text(self.out_dir / f"{stem}.csv", report.samples_csv())
        logger.info("Report written", extra={"experiment": report.name, "path": str(path)})
        return path


def run_experiments(
    configs: Sequence[ExperimentConfig],
    jobs: int = 1,
    writer: ReportWriter | None = None,
) -> list[Report]:
    """Run experiments on up to ``jobs`` threads; reports keep the input order.

    Every experiment builds its own problems and solver state, so runs share
    nothing but the writer.
    """
    experiments = [create_experiment(config) for config in configs]

    def _run(index: int) -> Report:
        report = experiments[index].execute()
        if writer is not None:
            writer.write(report)
        return report

    if jobs <= 1 or len(experiments) <= 1:
        return [_run(i) for i in range(len(experiments))]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run, range(len(experiments))))
