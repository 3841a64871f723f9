"""Nonlocal Poincare-Wirtinger constants for piecewise-constant fields."""

from __future__ import annotations

import logging
import math

import numpy as np
from pydantic import Field, model_validator

from minkowski_lab.energy.coarea import oscillation_integral
from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.blobs import blob_priority
from minkowski_lab.experiments.types import Report
from minkowski_lab.grid.geometry import GridGeometry
from minkowski_lab.grid.mask import ScalarField
from minkowski_lab.grid.window import Window

logger = logging.getLogger(__name__)


class PoincareParams(ExperimentParams):
    """Parameters of the Poincare-Wirtinger sweep and the sign-function example."""

    n: int = Field(default=2, ge=1, le=3)
    R: float = Field(default=1.0, gt=0)
    r: float = Field(default=0.25, gt=0)
    h: float = Field(default=0.02, gt=0)
    samples: int = Field(default=100, ge=0)
    levels: int = Field(default=3, ge=2, le=16)
    sign_radii: tuple[float, ...] = (2.0, 4.0, 8.0)
    sign_h: float = Field(default=1 / 16, gt=0)
    growth_min: float = Field(default=1.8, gt=0)

    @model_validator(mode="after")
    def check_regime(self) -> PoincareParams:
        if self.r > self.R:
            raise ValueError(f"r must be <= R, got r={self.r}, R={self.R}")
        if len(self.sign_radii) < 2 or list(self.sign_radii) != sorted(self.sign_radii):
            raise ValueError("sign_radii must hold at least two increasing radii")
        return self


def poincare_sides(u: ScalarField, window: Window, r: float, R: float) -> tuple[float, float]:
    """Integral of |u - mean| over the window and (R/r) times the oscillation integral."""
    geom = u.geometry
    inside = u.values[window.cells]
    mean = float(inside.mean()) if inside.size else 0.0
    lhs = float(np.abs(inside - mean).sum() * geom.cell_volume)
    rhs = R / r * oscillation_integral(u, window, r)
    return lhs, rhs


def random_levels(
    geometry: GridGeometry, rng: np.random.Generator, levels: int, scale: float
) -> ScalarField:
    """Piecewise-constant field: smoothed noise cut at random quantiles."""
    priority = blob_priority(geometry, rng, scale, bias=0.0)
    cuts = np.sort(rng.uniform(0.0, 1.0, size=levels - 1))
    thresholds = np.quantile(priority, cuts)
    rank = np.searchsorted(thresholds, priority)
    values = rng.integers(-4, 5, size=levels).astype(np.float64)
    return ScalarField(geometry, values[rank])


def sign_function_case(R: float, radii: tuple[float, ...], h: float) -> list[dict[str, float]]:
    """u = sign(x) on the line; the needed constant is r/2 once r >= R."""
    reach = math.ceil((R + max(radii)) / h)
    geometry = GridGeometry.box((-reach * h,), (reach * h,), h)
    centers = geometry.center_grid()[..., 0]
    u = ScalarField(geometry, np.sign(centers))
    window = Window.ball(geometry, (0.0,), R)
    rows = []
    for r in radii:
        lhs, rhs = poincare_sides(u, window, r, R)
        rows.append({"r": r, "lhs": lhs, "rhs": rhs, "constant": lhs / rhs})
    return rows


def pw_sweep(params: PoincareParams) -> Report:
    """Empirical constants C = LHS / ((R/r) * integral of osc) over random fields on B_R."""
    n, R, r, h = params.n, params.R, params.r, params.h
    cells = math.ceil((R + r) / h) + 1
    geometry = GridGeometry.box((-cells * h,) * n, (cells * h,) * n, h)
    window = Window.ball(geometry, (0.0,) * n, R)
    report = Report(name="poincare", config=params.model_dump(mode="json"), seed=params.seed)
    rng = np.random.default_rng(params.seed)

    constants: list[float] = []
    skipped = 0
    for index in range(params.samples):
        u = random_levels(geometry, rng, params.levels, R / 2)
        lhs, rhs = poincare_sides(u, window, r, R)
        if rhs == 0:
            skipped += 1
            continue
        constant = lhs / rhs
        constants.append(constant)
        report.samples.append({"index": index, "lhs": lhs, "rhs": rhs, "constant": constant})
        logger.debug("Poincare sample", extra={"index": index, "constant": constant})

    rows = sign_function_case(1.0, params.sign_radii, params.sign_h)
    growth = [b["constant"] / a["constant"] for a, b in zip(rows, rows[1:])]
    sup = max(constants) if constants else None
    report.summary.update(
        {
            "sup_constant": sup,
            "evaluated": len(constants),
            "skipped": skipped,
            "sign_function": rows,
            "sign_growth": growth,
        }
    )
    report.check(
        "bounded_for_small_r",
        sup is not None and math.isfinite(sup),
        "the Poincare-Wirtinger constant stays bounded when r <= R",
        value=sup,
    )
    report.check(
        "sign_lhs_exact",
        abs(rows[0]["lhs"] - 2.0) <= 1e-9,
        "u = sign(x) on B_1 has zero mean and L1 norm 2",
        value=rows[0]["lhs"],
        tolerance=1e-9,
    )
    report.check(
        "sign_constant_grows",
        min(growth) >= params.growth_min,
        "for r > R the needed constant grows linearly in r",
        value=min(growth),
        tolerance=params.growth_min,
    )
    return report


class PoincareExperiment(Experiment):
    name = "poincare"

    def run(self) -> Report:
        assert isinstance(self.params, PoincareParams)
        return pw_sweep(self.params)
