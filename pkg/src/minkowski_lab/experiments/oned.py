"""Exhaustive classification of one-dimensional minimizers."""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any

import numpy as np
from pydantic import Field

from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.types import Report
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window
from minkowski_lab.solver.brute_force import DEFAULT_ORACLE_CAP, BruteForceResult, brute_force
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import Canonical, DirichletSpec

logger = logging.getLogger(__name__)


class BoundaryData(str, Enum):
    """Exterior data for the one-dimensional problems."""

    LEFT = "left"
    RIGHT = "right"
    FULL = "full"
    EMPTY = "empty"


class OnedParams(ExperimentParams):
    """Parameters of the one-dimensional classification."""

    free_cells: int = Field(default=16, ge=1, le=DEFAULT_ORACLE_CAP)
    r_cells: int = Field(default=2, ge=1)
    h: float = Field(default=0.125, gt=0)
    random_cases: int = Field(default=8, ge=0)
    max_r_cells: int = Field(default=3, ge=1)


def line_problem(
    free_cells: int, r_cells: int, h: float, data: BoundaryData, trivial: bool = False
) -> DirichletSpec:
    """Dirichlet problem on a line with ``free_cells`` unknowns.

    The window is the free region padded by one stencil radius plus a cell.
    With ``trivial`` the free region is the whole window, so competitors may
    change the set up to the window boundary.
    """
    margin = 0 if trivial else r_cells + 1
    total = free_cells + 2 * margin
    geometry = GridGeometry.box((0.0,), (total * h,), h)
    index = np.arange(total)
    free = np.zeros(total, dtype=bool)
    free[margin : margin + free_cells] = True
    r = r_cells * h

    if data == BoundaryData.LEFT:
        bits = index < margin
        rule = ExtensionRule.half_space((1,), 0.0)
    elif data == BoundaryData.RIGHT:
        bits = index >= margin + free_cells
        rule = ExtensionRule.half_space((-1,), -total * h)
    elif data == BoundaryData.FULL:
        bits = np.ones(total, dtype=bool)
        rule = ExtensionRule.constant_inside()
    elif data == BoundaryData.EMPTY:
        bits = np.zeros(total, dtype=bool)
        rule = ExtensionRule.constant_outside()
    else:
        raise ValueError(f"Unknown boundary data: {data}")

    return DirichletSpec(
        window=Window.full(geometry),
        free=free,
        boundary=BinaryMask(geometry, bits, rule),
        r=r,
        enforce_margin=not trivial,
        label=f"line:{data.value}:{free_cells}:{r_cells}{':trivial' if trivial else ''}",
    )


def is_half_line(bits: np.ndarray, data: BoundaryData) -> bool:
    """Window bits form a discrete half-line continuing the boundary data."""
    steps = np.diff(bits.astype(np.int64))
    if data == BoundaryData.LEFT:
        return bool(np.all(steps <= 0))
    if data == BoundaryData.RIGHT:
        return bool(np.all(steps >= 0))
    if data == BoundaryData.FULL:
        return bool(bits.all())
    return not bits.any()


def _solver_agrees(spec: DirichletSpec, oracle: BruteForceResult) -> bool:
    result = solve(spec, Canonical.MINIMAL)
    matches = np.flatnonzero(oracle.labelings == oracle.bottom)
    if matches.size == 0:
        return False
    bottom = oracle.minimizers[int(matches[0])]
    return result.energy.scaled_total == oracle.min_scaled and bool(
        np.array_equal(result.mask.bits, bottom.bits)
    )


def classify_case(
    free_cells: int, r_cells: int, h: float, data: BoundaryData
) -> dict[str, Any]:
    """Enumerate one problem and its relaxed (trivial) variant."""
    spec = line_problem(free_cells, r_cells, h, data)
    oracle = brute_force(spec)
    half_lines = all(is_half_line(m.bits, data) for m in oracle.minimizers)
    expected_count = free_cells + 1 if data in (BoundaryData.LEFT, BoundaryData.RIGHT) else 1

    relaxed = line_problem(free_cells, r_cells, h, data, trivial=True)
    relaxed_oracle = brute_force(relaxed)
    trivial = all(m.bits.all() or not m.bits.any() for m in relaxed_oracle.minimizers)

    return {
        "data": data.value,
        "free_cells": free_cells,
        "r_cells": r_cells,
        "minimizers": len(oracle.minimizers),
        "expected_minimizers": expected_count,
        "half_lines": half_lines,
        "all_translates": len(oracle.minimizers) == expected_count,
        "lattice": oracle.is_lattice(),
        "solver_agrees": _solver_agrees(spec, oracle),
        "trivial_minimizers": len(relaxed_oracle.minimizers),
        "trivial": trivial,
    }


def oned_classification(params: OnedParams) -> Report:
    """Brute-force every admissible 1D problem of the configured sizes."""
    report = Report(name="oned", config=params.model_dump(mode="json"), seed=params.seed)
    cases = [(params.free_cells, params.r_cells, data) for data in BoundaryData]
    rng = np.random.default_rng(params.seed)
    for _ in range(params.random_cases):
        cases.append(
            (
                int(rng.integers(1, params.free_cells + 1)),
                int(rng.integers(1, params.max_r_cells + 1)),
                BoundaryData(str(rng.choice([d.value for d in BoundaryData]))),
            )
        )

    for free_cells, r_cells, data in cases:
        row = classify_case(free_cells, r_cells, params.h, data)
        report.samples.append(row)
        logger.debug("Line case", extra=row)

    samples = report.samples
    report.summary.update(
        {"cases": len(samples), "free_cells": params.free_cells, "oracle_cap": DEFAULT_ORACLE_CAP}
    )
    report.check(
        "minimizers_are_half_lines",
        all(s["half_lines"] for s in samples),
        "one-dimensional minimizers are empty, full or half-lines",
    )
    report.check(
        "every_translate_minimizes",
        all(s["all_translates"] for s in samples),
        "with half-line data every position of the cut inside the free region is optimal",
    )
    report.check(
        "argmin_is_lattice",
        all(s["lattice"] for s in samples),
        "minimizers are closed under intersection and union",
    )
    report.check(
        "solver_matches_enumeration",
        all(s["solver_agrees"] for s in samples),
        "the min-cut minimum and minimal minimizer equal the enumerated ones",
    )
    report.check(
        "unconstrained_is_trivial",
        all(s["trivial"] for s in samples),
        "minimizing up to the window boundary leaves only the empty or full set",
    )
    return report


class OnedExperiment(Experiment):
    name = "oned"

    def run(self) -> Report:
        assert isinstance(self.params, OnedParams)
        return oned_classification(self.params)
