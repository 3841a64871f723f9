"""Volume growth f(R) = |E intersected with B_R| of minimizers around a point."""

from __future__ import annotations

import logging
import math

import numpy as np
from pydantic import Field

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.types import DensityProfile, Report
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, ScalarField
from minkowski_lab.grid.measure import unit_ball_volume
from minkowski_lab.grid.shapes import HalfSpaceShape, rasterize
from minkowski_lab.grid.window import Window
from minkowski_lab.morphology.operators import erode
from minkowski_lab.solver.graph import Encoding
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import Canonical, DirichletSpec

logger = logging.getLogger(__name__)


def _max_radius(geometry: GridGeometry, center: np.ndarray) -> float:
    lo = np.asarray(geometry.origin)
    hi = lo + np.asarray(geometry.shape) * geometry.spacing
    room = [
        min(c - a, b - c)
        for c, a, b, periodic in zip(center, lo, hi, geometry.periodic_axes)
        if not periodic
    ]
    return float(min(room)) if room else math.inf


def profile_mask(
    mask: BinaryMask,
    center: tuple[float, ...],
    R0: float,
    r: float,
    depth: int | None = None,
    small_threshold: float | None = None,
    recursion_constant: float | None = None,
) -> DensityProfile:
    """Evaluate f at R_k = R0 + 2kr and fit the growth constants.

    Args:
        mask: The set E
        center: Center of the balls
        R0: First radius
        r: Radius of the functional; radii step by 2r
        depth: Largest k; defaults to the last ball inside the stored box
        small_threshold: Volume below which growth is read as ratios;
            defaults to |B_r|
        recursion_constant: Constant c the steps are checked against in
            f(R + 2r) >= f(R) + c f(R)^((n-1)/n); no check when None

    Raises:
        GeometryError: If B_{R0} does not fit in the stored box
    """
    geom = mask.geometry
    n = geom.dim
    middle = np.asarray(center, dtype=np.float64)
    room = _max_radius(geom, middle)
    if R0 > room:
        raise GeometryError(f"ball of radius {R0} leaves the stored box", field="R0")
    if depth is None:
        depth = int(math.floor((room - R0) / (2 * r) + 1e-9)) if math.isfinite(room) else 8
    if R0 + 2 * depth * r > room + 1e-9:
        raise GeometryError(f"depth {depth} leaves the stored box", field="depth")

    d2 = ((geom.center_grid() - middle) ** 2).sum(axis=-1)
    radii = [R0 + 2 * k * r for k in range(depth + 1)]
    cell = geom.cell_volume
    values: list[float] = []
    ball_values: list[float] = []
    for radius in radii:
        ball = d2 <= radius**2 * (1 + 1e-12)
        values.append(int(np.count_nonzero(mask.bits & ball)) * cell)
        ball_values.append(int(np.count_nonzero(ball)) * cell)

    threshold = small_threshold if small_threshold is not None else unit_ball_volume(n) * r**n
    ratios: list[float] = []
    for prev, cur in zip(values, values[1:]):
        if prev >= threshold:
            break
        if prev > 0:
            ratios.append(cur / prev)

    power = (n - 1) / n
    steps = [
        k
        for k in range(depth)
        if radii[k] >= r and 0 < values[k] <= ball_values[k] / 2
    ]
    increments = [(values[k + 1] - values[k]) / values[k] ** power for k in steps]
    c_emp = min(increments) if increments else None
    holds = (
        [inc >= recursion_constant - 1e-12 for inc in increments]
        if recursion_constant is not None
        else []
    )

    positive = [(R, f) for R, f in zip(radii, values) if f > 0 and R > 0]
    exponent = None
    if len(positive) >= 2:
        logs = np.log(np.asarray(positive))
        exponent = float(np.polyfit(logs[:, 0], logs[:, 1], 1)[0])

    envelope: list[float] = []
    slope = None
    if values[0] > 0 and depth >= 1:
        base = values[0] ** (1 / n)
        slope = min((values[k] ** (1 / n) - base) / (2 * k * r) for k in range(1, depth + 1))
        envelope = [(base + 2 * k * r * slope) ** n for k in range(depth + 1)]

    return DensityProfile(
        center=tuple(float(c) for c in middle),
        r=r,
        dim=n,
        radii=radii,
        values=values,
        c_emp=c_emp,
        exponent=exponent,
        ratios=ratios,
        small_threshold=threshold,
        envelope=envelope,
        envelope_slope=slope,
        recursion_constant=recursion_constant,
        recursion_holds=holds,
    )


def boundary_point(mask: BinaryMask, near: tuple[float, ...]) -> tuple[float, ...]:
    """Center of the set cell nearest ``near`` that has a face neighbour outside the set.

    Raises:
        GeometryError: If the set has no boundary cell
    """
    geom = mask.geometry
    edge = mask.bits & ~erode(mask, geom.spacing).bits
    if not edge.any():
        raise GeometryError("set has no boundary cells", field="mask")
    centers = geom.centers(np.argwhere(edge))
    d2 = ((centers - np.asarray(near, dtype=np.float64)) ** 2).sum(axis=-1)
    return tuple(float(c) for c in centers[int(np.argmin(d2))])


def density_profile(
    spec: DirichletSpec,
    center: tuple[float, ...] | None,
    R0: float,
    depth: int | None = None,
    encoding: Encoding = Encoding.INTERVAL,
    recursion_constant: float | None = None,
) -> DensityProfile:
    """Solve ``spec`` for its minimal minimizer and profile it around ``center``.

    With ``center`` None the profile is taken at the boundary point of the
    minimizer nearest the middle of the stored box.
    """
    result = solve(spec, Canonical.MINIMAL, encoding=encoding)
    if center is None:
        geom = spec.geometry
        middle = geom.center_grid().reshape(-1, geom.dim).mean(axis=0)
        center = boundary_point(result.mask, tuple(float(c) for c in middle))
    return profile_mask(
        result.mask, center, R0, spec.r, depth, recursion_constant=recursion_constant
    )


class DensityParams(ExperimentParams):
    """Parameters of the density experiment."""

    n: int = Field(default=2, ge=1, le=3)
    r: float = Field(default=0.25, gt=0)
    h: float = Field(default=0.05, gt=0)
    half_width: float = Field(default=3.0, gt=0)
    R0: float = Field(default=0.25, gt=0)
    eta: float = Field(default=0.1, ge=0)
    tolerance: float = Field(default=0.02, ge=0)
    # Relative isoperimetric constant C; steps are checked against c = 2r/C.
    isoperimetric_constant: float = Field(default=4.0, gt=0)

    @property
    def recursion_constant(self) -> float:
        return 2 * self.r / self.isoperimetric_constant


def noisy_half_space_problem(params: DensityParams) -> DirichletSpec:
    """Half-space boundary data with bounded random forcing on a full box."""
    n, h = params.n, params.h
    cells = math.ceil(params.half_width / h)
    geometry = GridGeometry.box((-cells * h,) * n, (cells * h,) * n, h)
    normal = (1,) + (0,) * (n - 1)
    boundary = rasterize(HalfSpaceShape(normal=normal, offset=0.0), geometry)
    window = Window.full(geometry)
    box = BinaryMask(geometry, window.cells, ExtensionRule.constant_outside())
    free = erode(box, params.r).bits
    rng = np.random.default_rng(params.seed)
    g = ScalarField(geometry, rng.uniform(-params.eta, params.eta, size=geometry.shape))
    return DirichletSpec(
        window=window, free=free, boundary=boundary, r=params.r, g=g, label="density"
    )


def density_experiment(params: DensityParams) -> Report:
    """Profile a flat half-space against its closed form, then a solver output.

    The forcing moves the interface off the origin, so the minimizer is
    profiled around its boundary point nearest the middle of the box.
    """
    n, r = params.n, params.r
    report = Report(name="density", config=params.model_dump(mode="json"), seed=params.seed)
    origin = (0.0,) * n

    problem = noisy_half_space_problem(params)
    c = params.recursion_constant
    flat = profile_mask(problem.boundary, origin, params.R0, r, recursion_constant=c)
    errors = []
    for radius, value in zip(flat.radii, flat.values):
        exact = unit_ball_volume(n) * radius**n / 2
        if radius >= 20 * params.h:
            errors.append(abs(value - exact) / exact)
    flat_error = max(errors) if errors else 0.0
    report.samples.append({"kind": "half_space", **flat.model_dump(mode="json")})

    solved = density_profile(problem, None, params.R0, recursion_constant=c)
    report.samples.append({"kind": "minimizer", **solved.model_dump(mode="json")})
    report.summary.update(
        {
            "half_space_max_error": flat_error,
            "minimizer_center": solved.center,
            "minimizer_c_emp": solved.c_emp,
            "minimizer_exponent": solved.exponent,
            "minimizer_ratios": solved.ratios,
            "recursion_constant": c,
        }
    )

    report.check(
        "profiles_nondecreasing",
        flat.nondecreasing and solved.nondecreasing,
        "f(R) is nondecreasing because balls are nested",
    )
    report.check(
        "half_space_closed_form",
        flat_error <= params.tolerance,
        "f(R) for a half-space through the center is half the ball volume",
        value=flat_error,
        tolerance=params.tolerance,
    )
    for kind, profile in (("half_space", flat), ("minimizer", solved)):
        fitted = profile.c_emp
        report.check(
            f"{kind}_recursion",
            (fitted is None or fitted > 0) and all(profile.recursion_holds),
            "every polynomial-regime step gains at least c f(R)^((n-1)/n) with c = 2r/C",
            value=fitted,
            tolerance=c,
        )
    growth = min((b - a for a, b in zip(solved.values, solved.values[1:])), default=0.0)
    report.check(
        "minimizer_grows",
        growth > 0,
        "a minimizer through the center gains volume at every step of size 2r",
        value=growth,
    )
    return report


class DensityExperiment(Experiment):
    name = "density"

    def run(self) -> Report:
        assert isinstance(self.params, DensityParams)
        return density_experiment(self.params)
