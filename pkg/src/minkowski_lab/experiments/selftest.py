"""Exactness suites: solver against enumeration, coarea and submodularity."""

from __future__ import annotations

import logging

import numpy as np
from pydantic import Field

from minkowski_lab.energy.coarea import coarea_check
from minkowski_lab.energy.submodularity import submodularity_slack_count
from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.types import Report
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, ScalarField
from minkowski_lab.grid.window import Window
from minkowski_lab.morphology.operators import erode
from minkowski_lab.solver.brute_force import brute_force
from minkowski_lab.solver.graph import Encoding
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import Canonical, DirichletSpec

logger = logging.getLogger(__name__)

_SMALL_SHAPES = {1: (20,), 2: (7, 7), 3: (5, 5, 5)}


class SelftestParams(ExperimentParams):
    """Sizes of the exactness suites."""

    instances: int = Field(default=50, ge=0)
    max_free: int = Field(default=16, ge=1, le=20)
    coarea_fields: int = Field(default=100, ge=0)
    coarea_side: int = Field(default=32, ge=4)
    max_levels: int = Field(default=8, ge=2, le=64)
    submodular_pairs: int = Field(default=1000, ge=0)
    submodular_side: int = Field(default=24, ge=4)


def random_extension(rng: np.random.Generator, dim: int) -> ExtensionRule:
    """One of the constant or half-space exterior rules."""
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return ExtensionRule.constant_inside()
    if kind == 1:
        return ExtensionRule.constant_outside()
    normal = tuple(int(v) for v in rng.integers(-2, 3, size=dim))
    if not any(normal):
        normal = (1,) + (0,) * (dim - 1)
    return ExtensionRule.half_space(normal, float(rng.normal(0.0, 2.0)))


def random_small_spec(rng: np.random.Generator, max_free: int) -> DirichletSpec:
    """Seeded Dirichlet problem with at most ``max_free`` free cells.

    Spacing is 1 and r is drawn from {1, sqrt 2, 2}; the free cells are a
    random subset of the window eroded by r, so the margin rule holds.
    """
    dim = int(rng.integers(1, 4))
    shape = _SMALL_SHAPES[dim]
    geometry = GridGeometry(dim=dim, shape=shape, spacing=1.0)
    r = float(rng.choice([1.0, float(np.sqrt(2.0)), 2.0]))
    window = Window.full(geometry)
    window_set = BinaryMask(geometry, window.cells, ExtensionRule.constant_outside())
    interior = np.flatnonzero(erode(window_set, r).bits.ravel())
    count = int(rng.integers(0, min(max_free, interior.size) + 1))
    chosen = rng.choice(interior, size=count, replace=False) if count else np.empty(0, int)
    free = np.zeros(geometry.cell_count, dtype=bool)
    free[chosen] = True
    boundary = BinaryMask(geometry, rng.random(shape) < 0.5, random_extension(rng, dim))
    g = None
    if rng.random() < 0.7:
        g = ScalarField(geometry, rng.uniform(-1.5, 1.5, size=shape))
    return DirichletSpec(
        window=window,
        free=free.reshape(shape),
        boundary=boundary,
        r=r,
        g=g,
        capacity_scale=int(rng.choice([1, 16, 1024, 2**20])),
        label=f"random:{dim}d",
    )


def oracle_suite(params: SelftestParams, rng: np.random.Generator, report: Report) -> None:
    """Solver versus exhaustive enumeration on random small problems."""
    energy_ok = bottom_ok = top_ok = lattice_ok = encodings_ok = 0
    for index in range(params.instances):
        spec = random_small_spec(rng, params.max_free)
        oracle = brute_force(spec)
        lowest = solve(spec, Canonical.MINIMAL)
        highest = solve(spec, Canonical.MAXIMAL)
        direct = solve(spec, Canonical.MINIMAL, encoding=Encoding.DIRECT)
        labels = oracle.labelings
        bottom = oracle.minimizers[int(np.flatnonzero(labels == oracle.bottom)[0])]
        top = oracle.minimizers[int(np.flatnonzero(labels == oracle.top)[0])]

        energy_ok += lowest.energy.scaled_total == oracle.min_scaled
        bottom_ok += bool(np.array_equal(lowest.mask.bits, bottom.bits))
        top_ok += bool(np.array_equal(highest.mask.bits, top.bits))
        lattice_ok += oracle.is_lattice()
        encodings_ok += bool(np.array_equal(direct.mask.bits, lowest.mask.bits))
        report.samples.append(
            {
                "suite": "oracle",
                "index": index,
                "label": spec.label,
                "free_cells": spec.free_count,
                "min_scaled": oracle.min_scaled,
                "minimizers": len(oracle.minimizers),
            }
        )
        logger.debug("Oracle instance", extra={"index": index, "free": spec.free_count})

    n = params.instances
    report.check(
        "solver_energy_exact",
        energy_ok == n,
        "the min-cut energy equals the enumerated minimum",
        value=energy_ok,
        tolerance=0.0,
    )
    report.check(
        "minimal_is_intersection",
        bottom_ok == n,
        "the minimal minimizer is the intersection of all minimizers",
        value=bottom_ok,
        tolerance=0.0,
    )
    report.check(
        "maximal_is_union",
        top_ok == n,
        "the maximal minimizer is the union of all minimizers",
        value=top_ok,
        tolerance=0.0,
    )
    report.check(
        "argmin_is_lattice",
        lattice_ok == n,
        "minimizers are closed under intersection and union",
        value=lattice_ok,
        tolerance=0.0,
    )
    report.check(
        "encodings_agree",
        encodings_ok == n,
        "interval and direct graph encodings return the same minimal minimizer",
        value=encodings_ok,
        tolerance=0.0,
    )


def random_level_field(
    rng: np.random.Generator, geometry: GridGeometry, max_levels: int
) -> ScalarField:
    """Cellwise random field with at most ``max_levels`` distinct values."""
    levels = int(rng.integers(2, max_levels + 1))
    values = rng.choice(np.arange(-16, 17), size=levels, replace=False).astype(np.float64) / 4
    return ScalarField(geometry, values[rng.integers(0, levels, size=geometry.shape)])


def coarea_suite(params: SelftestParams, rng: np.random.Generator, report: Report) -> None:
    """Coarea identity on random piecewise-constant fields at r = h, 2h, 4h."""
    side = params.coarea_side
    h = 1.0 / side
    geometry = GridGeometry(dim=2, shape=(side, side), spacing=h)
    window = Window.full(geometry)
    exact = 0
    checks = 0
    for index in range(params.coarea_fields):
        u = random_level_field(rng, geometry, params.max_levels - 1)
        for k in (1, 2, 4):
            result = coarea_check(u, window, k * h)
            exact += result.exact
            checks += 1
        report.samples.append({"suite": "coarea", "index": index, "levels": int(u.levels().size)})
    report.check(
        "coarea_exact",
        exact == checks,
        "the oscillation integral equals 2r times the integral of Per_r over superlevels",
        value=exact,
        tolerance=0.0,
    )


def submodularity_suite(params: SelftestParams, rng: np.random.Generator, report: Report) -> None:
    """Submodularity slack on random mask pairs at r = h, 2h, 4h."""
    side = params.submodular_side
    h = 1.0 / side
    geometry = GridGeometry(dim=2, shape=(side, side), spacing=h)
    window = Window.full(geometry)
    smallest: int | None = None
    for _ in range(params.submodular_pairs):
        rule = random_extension(rng, 2)
        a = BinaryMask(geometry, rng.random(geometry.shape) < rng.random(), rule)
        b = BinaryMask(geometry, rng.random(geometry.shape) < rng.random(), rule)
        for k in (1, 2, 4):
            slack = submodularity_slack_count(a, b, window, k * h)
            smallest = slack if smallest is None else min(smallest, slack)
    report.summary["submodularity_min_slack"] = smallest
    report.check(
        "submodularity_nonnegative",
        smallest is None or smallest >= 0,
        "Per_r(A and B) + Per_r(A or B) <= Per_r(A) + Per_r(B)",
        value=smallest,
        tolerance=0.0,
    )


def run_selftest(params: SelftestParams) -> Report:
    """Run the oracle, coarea and submodularity suites under one seed."""
    report = Report(name="selftest", config=params.model_dump(mode="json"), seed=params.seed)
    rng = np.random.default_rng(params.seed)
    oracle_suite(params, rng, report)
    coarea_suite(params, rng, report)
    submodularity_suite(params, rng, report)
    report.summary.update(
        {
            "instances": params.instances,
            "coarea_fields": params.coarea_fields,
            "submodular_pairs": params.submodular_pairs,
        }
    )
    return report


class SelftestExperiment(Experiment):
    name = "selftest"

    def run(self) -> Report:
        assert isinstance(self.params, SelftestParams)
        return run_selftest(self.params)
