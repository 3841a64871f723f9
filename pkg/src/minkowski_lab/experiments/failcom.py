"""Loss of compactness for F_{r,g}: the annulus family and oscillating stripes.

With g = -K on the annulus B_r minus B_{r/2}, the annulus E has
(boundary of E) dilated by B_r equal to B_{2r}, so any U inside the hole
leaves F unchanged. For large K the annulus beats every competitor, hence
minimizers come in an uncountable family with no L1-convergent selection.
"""

from __future__ import annotations

import itertools
import logging
import math

import numpy as np
from pydantic import Field, model_validator

from minkowski_lab.energy.perimeter import energy, perimeter_r
from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.types import Report
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, ScalarField
from minkowski_lab.grid.measure import annulus_energy
from minkowski_lab.grid.shapes import AnnulusShape, BallShape, StripesShape, rasterize
from minkowski_lab.grid.window import Window
from minkowski_lab.morphology.operators import erode
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import DEFAULT_CAPACITY_SCALE, Canonical, DirichletSpec

logger = logging.getLogger(__name__)


class FailcomParams(ExperimentParams):
    """Parameters of the annulus pathology and the stripe family."""

    n: int = Field(default=2, ge=2, le=3)
    r: float = Field(default=1.0, gt=0)
    K: float = Field(default=20.0, gt=0)
    h: float = Field(default=0.02, gt=0)
    # Lattice of the solver run; None solves on the h lattice.
    solve_h: float | None = Field(default=None, gt=0)
    window_radius: float = Field(default=3.0, gt=0)
    u_samples: int = Field(default=10, ge=0)
    tolerance: float = Field(default=0.02, ge=0)
    stripe_levels: int = Field(default=6, ge=2, le=8)
    stripe_h: float = Field(default=1 / 128, gt=0)
    stripe_fraction: float = Field(default=0.4, gt=0)
    capacity_scale: int = Field(default=DEFAULT_CAPACITY_SCALE, ge=1)

    @model_validator(mode="after")
    def check_regime(self) -> FailcomParams:
        if self.K * self.r < 10:
            raise ValueError(f"K must be >= 10/r, got K={self.K}, r={self.r}")
        if self.window_radius < 3 * self.r:
            raise ValueError("window_radius must be >= 3r so that B_2r is free")
        return self

    @property
    def solve_spacing(self) -> float:
        return self.h if self.solve_h is None else self.solve_h


def annulus_problem(
    params: FailcomParams, h: float
) -> tuple[GridGeometry, BinaryMask, ScalarField]:
    """Lattice, annulus B_r minus B_{r/2} and forcing -K on it."""
    n, r = params.n, params.r
    cells = math.ceil(params.window_radius / h)
    geometry = GridGeometry.box((-cells * h,) * n, (cells * h,) * n, h)
    annulus = rasterize(AnnulusShape(center=(0.0,) * n, inner=r / 2, outer=r), geometry)
    g = ScalarField.indicator(annulus, -params.K)
    return geometry, annulus, g


def _hole(geometry: GridGeometry, r: float) -> BinaryMask:
    return rasterize(BallShape(center=(0.0,) * geometry.dim, radius=r / 2), geometry)


def hole_core(geometry: GridGeometry, r: float) -> np.ndarray:
    """Cells of B_{r/2} at least one cell away from its boundary."""
    return erode(_hole(geometry, r), geometry.spacing).bits


def stripe_family(levels: int, h: float, n: int = 2) -> tuple[GridGeometry, list[BinaryMask]]:
    """E_k for k = 1..levels on (-3, 3) x (0, 1)^(n-1).

    E_k is the union over |j| <= 2^(k-1) of (2j/2^k, (2j+1)/2^k) x (0, 1)^(n-1).
    """
    geometry = GridGeometry.box((-3.0,) + (0.0,) * (n - 1), (3.0,) + (1.0,) * (n - 1), h)
    x = geometry.center_grid()[..., 0]
    family = []
    for k in range(1, levels + 1):
        width = 2.0**-k
        stripes = rasterize(StripesShape(period=2 * width, duty=0.5, axis=0), geometry).bits
        bits = stripes & (x > -1.0) & (x < 1.0 + width)
        family.append(BinaryMask(geometry, bits, ExtensionRule.constant_outside()))
    return geometry, family


def failcom_experiment(params: FailcomParams) -> Report:
    """Annulus closed form, solver comparison, E_U degeneracy and stripe distances."""
    n, r, K = params.n, params.r, params.K
    report = Report(name="failcom", config=params.model_dump(mode="json"), seed=params.seed)
    closed = annulus_energy(n, r, K)

    geometry, annulus, g = annulus_problem(params, params.h)
    window = Window.ball(geometry, (0.0,) * n, params.window_radius)
    base = energy(annulus, g, window, r, params.capacity_scale)
    annulus_error = abs(base.total - closed) / abs(closed)
    report.check(
        "annulus_closed_form",
        annulus_error <= params.tolerance,
        "F of the annulus equals 2^(n-1) w_n r^(n-1) - w_n (1 - 2^-n) K r^n",
        value=annulus_error,
        tolerance=params.tolerance,
    )

    solve_geometry, solve_annulus, solve_g = annulus_problem(params, params.solve_spacing)
    solve_window = Window.ball(solve_geometry, (0.0,) * n, params.window_radius)
    window_set = BinaryMask(solve_geometry, solve_window.cells, ExtensionRule.constant_outside())
    free = Window.ball(solve_geometry, (0.0,) * n, 2 * r).cells & erode(window_set, r).bits
    problem = DirichletSpec(
        window=solve_window,
        free=free,
        boundary=BinaryMask.empty(solve_geometry),
        r=r,
        g=solve_g,
        capacity_scale=params.capacity_scale,
        label="failcom",
    )
    result = solve(problem, Canonical.MINIMAL)
    bound = closed * (1 - params.tolerance)
    report.check(
        "solver_reaches_annulus_energy",
        result.energy.total <= bound,
        "the minimum of F is at most the annulus energy",
        value=result.energy.total,
        tolerance=params.tolerance,
    )
    covers_annulus = bool(np.all(result.mask.bits[solve_annulus.bits & free]))

    core = hole_core(geometry, r)
    rng = np.random.default_rng(params.seed)
    reference = base.scaled_total
    equal = 0
    for index in range(params.u_samples):
        density = 0.0 if index == 0 else float(rng.uniform(0.05, 0.95))
        u_bits = core & (rng.random(geometry.shape) < density)
        candidate = annulus.with_bits(annulus.bits | u_bits)
        value = energy(candidate, g, window, r, params.capacity_scale)
        same = value.scaled_total == reference
        equal += int(same)
        report.samples.append(
            {
                "kind": "annulus_union_u",
                "index": index,
                "u_cells": int(np.count_nonzero(u_bits)),
                "scaled_total": value.scaled_total,
                "equal": same,
            }
        )
        logger.debug("E_U sample", extra={"index": index, "equal": same})
    report.check(
        "annulus_union_u_degenerate",
        equal == params.u_samples,
        "F(annulus union U) = F(annulus) for every U inside the hole",
        value=equal,
        tolerance=0.0,
    )

    filled = annulus.union(_hole(geometry, r))
    filled_delta = energy(filled, g, window, r, params.capacity_scale).total - base.total

    stripe_geometry, family = stripe_family(params.stripe_levels, params.stripe_h, n)
    stripe_window = Window.full(stripe_geometry)
    cell = stripe_geometry.cell_volume
    distances = {
        f"{i + 1},{j + 1}": int(np.count_nonzero(a.bits ^ b.bits)) * cell
        for (i, a), (j, b) in itertools.combinations(enumerate(family), 2)
    }
    perimeters = [perimeter_r(mask, stripe_window, 1.0) for mask in family]
    min_distance = min(distances.values())
    threshold = params.stripe_fraction * 2.0 * 0.5
    report.check(
        "stripes_not_compact",
        min_distance >= threshold,
        "pairwise L1 distances of the stripe family stay bounded below",
        value=min_distance,
        tolerance=threshold,
    )
    report.check(
        "stripes_bounded_perimeter",
        max(perimeters) <= stripe_window.volume / 2,
        "the stripe family has uniformly bounded Per_1 in the window",
        value=max(perimeters),
        tolerance=stripe_window.volume / 2,
    )

    report.summary.update(
        {
            "closed_form": closed,
            "annulus_energy": base.total,
            "annulus_perimeter_term": base.perimeter_term,
            "solver_energy": result.energy.total,
            "solver_covers_annulus": covers_annulus,
            "solver_free_cells": problem.free_count,
            "solver_h": solve_geometry.spacing,
            "filled_hole_delta": filled_delta,
            "stripe_distances": distances,
            "stripe_perimeters": perimeters,
        }
    )
    return report


class FailcomExperiment(Experiment):
    name = "failcom"

    def run(self) -> Report:
        assert isinstance(self.params, FailcomParams)
        return failcom_experiment(self.params)
