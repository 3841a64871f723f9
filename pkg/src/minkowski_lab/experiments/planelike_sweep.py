"""Planelike minimizers across directions and radii."""

from __future__ import annotations

import logging
from typing import Any

from pydantic import Field, field_validator

from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.types import Report
from minkowski_lab.planelike.construct import construct_planelike, m_stability
from minkowski_lab.planelike.direction import rational_basis
from minkowski_lab.planelike.strip import PeriodicForcing, StripSpec

logger = logging.getLogger(__name__)


class PlanelikeSweepParams(ExperimentParams):
    """Directions, radii and medium of the planelike sweep."""

    omegas: tuple[tuple[int, ...], ...] = ((0, 1), (1, 1), (1, 2))
    radii: tuple[float, ...] = (0.25, 0.5, 1.0)
    spacing_ratio: int = Field(default=5, ge=1)
    M: float = Field(default=8.0, ge=2)
    eta: float = Field(default=0.05, ge=0, le=0.25)
    forcing: PeriodicForcing = PeriodicForcing.CHECKERBOARD
    check_stability: bool = True
    # Forcing amplitudes tried at the largest radius; empty skips the sweep.
    etas: tuple[float, ...] = (0.05, 0.1, 0.2)

    @field_validator("etas")
    @classmethod
    def validate_etas(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0 <= eta <= 0.25 for eta in v):
            raise ValueError(f"every eta must lie in [0, 0.25], got {v}")
        return v


def planelike_case(
    omega: tuple[int, ...],
    r: float,
    params: PlanelikeSweepParams,
    eta: float | None = None,
) -> dict[str, Any]:
    """Construct one minimal minimizer and collect its diagnostics."""
    strip = StripSpec(
        direction=rational_basis(omega),
        M=params.M,
        r=r,
        h=r / params.spacing_ratio,
        eta=params.eta if eta is None else eta,
        forcing=params.forcing,
        label="sweep",
    )
    result = construct_planelike(strip)
    row: dict[str, Any] = {
        "omega": list(omega),
        "r": r,
        "h": strip.h,
        "eta": strip.eta,
        "energy": result.solution.energy.total,
        "width": result.width,
        "sandwich": result.sandwich_ok,
        "periodic": result.periodic_ok,
        "birkhoff": result.birkhoff_ok,
        "layers_ordered": result.census.layers_ordered(),
        "census_identities": result.census.identities_hold(),
        "census_monotone": result.census.monotone,
        "census": result.census.model_dump(mode="json"),
    }
    if params.check_stability and eta is None:
        stability = m_stability(strip)
        row["stable"] = stability.stable
        row["stability_rise"] = stability.rise
        row["stability_exact"] = stability.exact
    return row


def planelike_sweep(params: PlanelikeSweepParams) -> Report:
    """Run every (omega, r) pair and assert the exact structural properties."""
    report = Report(name="planelike", config=params.model_dump(mode="json"), seed=params.seed)
    rows: list[dict[str, Any]] = []
    for omega in params.omegas:
        for r in params.radii:
            row = planelike_case(omega, r, params)
            rows.append({"kind": "radius", **row})
            logger.debug("Planelike case", extra={"omega": omega, "r": r, "width": row["width"]})
    report.samples.extend(rows)

    widths = [row["width"] for row in rows]
    report.summary.update({"cases": len(rows), "max_width": max(widths, default=0.0)})

    # A flat interface measures h: one coarsest cell on top of the factor 2.
    slack = max(params.radii, default=0.0) / params.spacing_ratio
    spread: dict[str, list[float]] = {}
    for omega in params.omegas:
        own = [row["width"] for row in rows if tuple(row["omega"]) == tuple(omega)]
        if own:
            spread[str(list(omega))] = [min(own), max(own)]
    report.summary["width_range"] = spread
    report.check(
        "width_uniform",
        all(hi <= 2 * lo + slack and hi <= params.M for lo, hi in spread.values()),
        "for each omega the width stays within a factor 2 across r and below M",
        value=max(widths, default=0.0),
        tolerance=slack,
    )

    flags = [
        ("sandwich", "minimizers stay between the half-spaces omega . x <= -M and omega . x <= M"),
        ("periodic", "minimal minimizers are invariant under every period vector"),
        ("birkhoff", "lattice translations order the minimizer by their omega-rise"),
        ("layers_ordered", "cube classes appear in order along omega"),
        ("census_identities", "grey cubes split into foggy classes consistently"),
        ("census_monotone", "cube densities never increase along omega"),
    ]
    if params.check_stability:
        flags.append(("stable", "doubling M reproduces the minimizer up to a lattice translation"))
        report.summary["exact_stability_cases"] = sum(bool(row["stability_exact"]) for row in rows)
    for key, statement in flags:
        report.check(key, all(row[key] for row in rows), statement)

    if params.etas and params.radii:
        _eta_sweep(report, params, [key for key, _ in flags if key != "stable"])
    return report


def _eta_sweep(report: Report, params: PlanelikeSweepParams, keys: list[str]) -> None:
    """Repeat the structural checks at the largest radius for every eta."""
    r = max(params.radii)
    passing: list[float] = []
    for eta in sorted(params.etas):
        rows = [planelike_case(omega, r, params, eta=eta) for omega in params.omegas]
        report.samples.extend({"kind": "eta", **row} for row in rows)
        if all(row[key] for row in rows for key in keys):
            passing.append(eta)
        logger.debug("Planelike eta case", extra={"eta": eta, "passed": eta in passing})

    largest = max(passing, default=None)
    report.summary["largest_eta"] = largest
    report.summary["passing_etas"] = passing
    report.check(
        "eta_sweep",
        passing == sorted(params.etas)[: len(passing)] and bool(passing),
        "the structural properties hold for every forcing amplitude up to the largest one tried",
        value=largest,
    )


class PlanelikeSweepExperiment(Experiment):
    name = "planelike"

    def run(self) -> Report:
        assert isinstance(self.params, PlanelikeSweepParams)
        return planelike_sweep(self.params)
