"""Minimal constrained minimizers on periodic strips and their diagnostics."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window
from minkowski_lab.planelike.birkhoff import birkhoff_violations
from minkowski_lab.planelike.census import ColorCensus, classify_cubes
from minkowski_lab.planelike.direction import RationalDirection
from minkowski_lab.planelike.strip import StripSpec, build_strip, lattice_offset, projections
from minkowski_lab.solver.graph import Encoding
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import Canonical, DirichletSpec, MinimizerResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PlanelikeResult:
    """Minimal minimizer on a strip with its geometric diagnostics."""

    strip: StripSpec
    problem: DirichletSpec
    solution: MinimizerResult
    width: float
    census: ColorCensus
    birkhoff_ok: bool
    periodic_ok: bool
    sandwich_ok: bool

    @property
    def mask(self) -> BinaryMask:
        return self.solution.mask


def transition_width(mask: BinaryMask, window: Window, direction: RationalDirection) -> float:
    """Thickness of the transition layer along omega.

    The distance from the lowest window cell outside E to the highest one
    inside E, plus one cell. A flat interface has width h.
    """
    proj = projections(mask.geometry, direction)
    inside = mask.bits & window.cells
    outside = ~mask.bits & window.cells
    if not inside.any() or not outside.any():
        return 0.0
    gap = float(proj[inside].max() - proj[outside].min())
    return max(0.0, gap) + mask.geometry.spacing


def sandwich_holds(mask: BinaryMask, direction: RationalDirection, M: float) -> bool:
    """{omega . x <= -M} subset E subset {omega . x <= M} on stored cells."""
    proj = projections(mask.geometry, direction)
    below = proj <= -M
    above = proj >= M
    return bool(np.all(mask.bits[below]) and not np.any(mask.bits[above]))


def periodicity_holds(mask: BinaryMask, direction: RationalDirection) -> bool:
    """Shifting by each K_j (not only by the stored period) fixes the mask."""
    s = round(1 / mask.geometry.spacing)
    for k in direction.period_basis:
        shifted = mask.shift(tuple(s * c for c in k))
        if not np.array_equal(shifted.bits, mask.bits):
            return False
    return True


def construct_planelike(
    strip: StripSpec,
    encoding: Encoding = Encoding.INTERVAL,
) -> PlanelikeResult:
    """Solve the constrained strip problem for its minimal minimizer.

    Args:
        strip: Strip problem
        encoding: Graph encoding for the solver

    Returns:
        PlanelikeResult with width, cube census and the Birkhoff,
        periodicity and constraint checks
    """
    problem = build_strip(strip)
    solution = solve(problem, Canonical.MINIMAL, encoding=encoding)
    mask = solution.mask
    direction = strip.direction

    width = transition_width(mask, problem.window, direction)
    census = classify_cubes(mask, strip.r, direction)
    violations = birkhoff_violations(mask, direction)
    result = PlanelikeResult(
        strip=strip,
        problem=problem,
        solution=solution,
        width=width,
        census=census,
        birkhoff_ok=not violations,
        periodic_ok=periodicity_holds(mask, direction),
        sandwich_ok=sandwich_holds(mask, direction, strip.M),
    )
    if violations:
        logger.warning(
            "Birkhoff inclusion violated",
            extra={
                "label": problem.label,
                "violations": {str(k): v for k, v in violations.items()},
            },
        )
    logger.info(
        "Planelike minimizer constructed",
        extra={
            "label": problem.label,
            "width": width,
            "birkhoff": result.birkhoff_ok,
            "periodic": result.periodic_ok,
            "sandwich": result.sandwich_ok,
        },
    )
    return result


@dataclass(frozen=True)
class StabilityCheck:
    """Outcome of comparing the M and 2M minimizers.

    ``translation`` is the lattice vector (lattice units) carrying the 2M
    minimizer onto the M one on the M-free band, or None when no
    translation along omega does. ``exact`` is set when the two agree on
    that band as they stand, without any translation.
    """

    stable: bool
    translation: tuple[int, ...] | None
    rise: float | None
    exact: bool = False


def align_masks(
    reference: BinaryMask,
    region: np.ndarray,
    candidate: BinaryMask,
    direction: RationalDirection,
    max_rise: float,
) -> tuple[int, ...] | None:
    """Smallest lattice translation t u (u the unit rise) matching on ``region``.

    Both masks must share spacing and sit on lattice-aligned origins.
    """
    s = round(1 / reference.geometry.spacing)
    step = np.asarray(direction.step_vector(), dtype=np.int64)
    rise = math.gcd(*direction.omega_int) / direction.norm
    limit = math.ceil(max_rise / rise)
    cells = np.argwhere(region).astype(np.int64)
    absolute = cells + lattice_offset(reference.geometry)
    expected = reference.bits[region]
    base = absolute - lattice_offset(candidate.geometry)
    for t in sorted(range(-limit, limit + 1), key=abs):
        moved = base - s * t * step
        if np.array_equal(candidate.lookup(moved), expected):
            return tuple(int(t * c) for c in step)
    return None


def m_stability(strip: StripSpec, encoding: Encoding = Encoding.INTERVAL) -> StabilityCheck:
    """Solve at M and 2M and compare modulo translations along omega.

    The minimal minimizer rests against the lower constraint, so the two
    masks agree only after a lattice translation.
    """
    small = construct_planelike(strip, encoding)
    doubled = replace(strip, M=2 * strip.M, repeats=strip.period_repeats())
    large = construct_planelike(doubled, encoding)
    region = np.asarray(small.problem.free)
    translation = align_masks(small.mask, region, large.mask, strip.direction, 3 * strip.M)
    if translation is None:
        return StabilityCheck(stable=False, translation=None, rise=None, exact=False)
    omega_unit = strip.direction.omega_unit
    rise = float(np.dot(translation, omega_unit))
    exact = not any(translation)
    return StabilityCheck(stable=True, translation=translation, rise=rise, exact=exact)
