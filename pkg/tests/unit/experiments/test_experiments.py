"""Small-parameter runs of each experiment and tests of their helpers."""

import itertools
import math

import numpy as np
import pytest
from pydantic import ValidationError

from minkowski_lab.domain.errors import GeometryError
from minkowski_lab.experiments.density import (
    DensityParams,
    boundary_point,
    density_experiment,
    profile_mask,
)
from minkowski_lab.experiments.failcom import FailcomParams, annulus_problem, stripe_family
from minkowski_lab.experiments.gamma import (
    ELLIPSE_2_1_PERIMETER,
    GammaParams,
    GammaShape,
    _decreasing,
    ellipse_perimeter,
    gamma_experiment,
    shape_and_perimeter,
)
from minkowski_lab.experiments.isoperimetry import (
    IsoperimetricParams,
    RelativeIsoperimetricParams,
    isoperimetric_sweep,
    relative_constant,
    relative_isoperimetric_sweep,
)
from minkowski_lab.experiments.oned import (
    BoundaryData,
    OnedParams,
    classify_case,
    is_half_line,
    oned_classification,
)
from minkowski_lab.experiments.planelike_sweep import PlanelikeSweepParams, planelike_sweep
from minkowski_lab.experiments.poincare import PoincareParams, pw_sweep, sign_function_case
from minkowski_lab.experiments.selftest import SelftestParams, run_selftest
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask
from minkowski_lab.grid.window import Window
from minkowski_lab.solver.brute_force import DEFAULT_ORACLE_CAP


def _names(report_verdicts: list) -> set[str]:
    return {v.name for v in report_verdicts}


class TestIsoperimetry:
    """Tests for the isoperimetric sweeps."""

    def test_regime_validation(self) -> None:
        """r must not exceed R and h must resolve r."""
        with pytest.raises(ValidationError):
            IsoperimetricParams(R=1.0, r=2.0, h=0.01)
        with pytest.raises(ValidationError):
            IsoperimetricParams(r=0.5, h=0.1)

    def test_line_sweep(self) -> None:
        """On the line every connected blob of the ball's size is a translated ball."""
        params = IsoperimetricParams(n=1, R=2.0, r=0.5, h=0.05, samples=5)
        report = isoperimetric_sweep(params)
        assert report.passed
        assert report.summary["evaluated"] == 5
        assert report.summary["min_ratio"] == pytest.approx(1.0)

    def test_relative_constant(self) -> None:
        """Empty sets have no constant and a set without boundary has an infinite one."""
        geometry = GridGeometry.box((-1.0, -1.0), (1.0, 1.0), 0.1)
        window = Window.ball(geometry, (0.0, 0.0), 0.8)
        assert relative_constant(BinaryMask.empty(geometry), window, 0.2) is None
        assert relative_constant(BinaryMask.full(geometry), window, 0.2) == math.inf

    def test_relative_sweep(self) -> None:
        """The constant is bounded for r <= R and the small-ball constant grows for r > R."""
        params = RelativeIsoperimetricParams(n=2, R=1.0, r=0.5, h=0.05, samples=3)
        report = relative_isoperimetric_sweep(params)
        assert _names(report.verdicts) == {"bounded_for_small_r", "blows_up_for_large_r"}
        assert report.passed
        assert report.summary["small_ball"]["growth"] >= 3.0


class TestPoincare:
    """Tests for the Poincare-Wirtinger sweep."""

    def test_sign_function_case(self) -> None:
        """For u = sign(x) the needed constant is r/2 once r exceeds R."""
        rows = sign_function_case(1.0, (2.0, 4.0), 1 / 16)
        assert [row["lhs"] for row in rows] == [2.0, 2.0]
        assert rows[0]["constant"] == pytest.approx(1.0, rel=0.05)
        assert rows[1]["constant"] / rows[0]["constant"] == pytest.approx(2.0, rel=0.05)

    def test_small_sweep(self) -> None:
        """A short line sweep passes every check."""
        params = PoincareParams(n=1, R=1.0, r=0.25, h=0.05, samples=5)
        report = pw_sweep(params)
        assert report.passed
        assert report.summary["evaluated"] + report.summary["skipped"] == 5

    def test_sign_radii_must_increase(self) -> None:
        """Sign-function radii are validated."""
        with pytest.raises(ValidationError):
            PoincareParams(sign_radii=(4.0, 2.0))


class TestDensity:
    """Tests for volume-growth profiles."""

    @staticmethod
    def _half_plane() -> BinaryMask:
        geometry = GridGeometry.box((-2.0, -2.0), (2.0, 2.0), 0.05)
        bits = geometry.center_grid()[..., 0] < 0
        return BinaryMask(geometry, bits, ExtensionRule.half_space((1, 0), 0.0))

    def test_half_plane_profile(self) -> None:
        """A half-plane through the center grows like half a disk."""
        profile = profile_mask(self._half_plane(), (0.0, 0.0), 0.5, 0.25, recursion_constant=0.125)
        assert profile.radii == [0.5, 1.0, 1.5, 2.0]
        assert profile.nondecreasing
        assert profile.c_emp is not None and profile.c_emp > 0.125
        assert profile.recursion_holds and all(profile.recursion_holds)
        assert profile.exponent == pytest.approx(2.0, abs=0.1)
        for bound, value in zip(profile.envelope, profile.values):
            assert bound <= value + 1e-9

    def test_stalled_step_breaks_recursion(self) -> None:
        """A half disk stops gaining volume once the balls outgrow it."""
        geometry = GridGeometry.box((-2.0, -2.0), (2.0, 2.0), 0.05)
        centers = geometry.center_grid()
        bits = (centers[..., 0] < 0) & ((centers**2).sum(axis=-1) < 0.36)
        mask = BinaryMask(geometry, bits, ExtensionRule.constant_outside())
        profile = profile_mask(mask, (0.0, 0.0), 0.5, 0.25, recursion_constant=0.125)
        assert profile.values[2] == profile.values[1]
        assert profile.c_emp == 0.0
        assert profile.recursion_holds[0]
        assert not all(profile.recursion_holds)

    def test_no_constant_no_check(self) -> None:
        """Without a constant only the fitted c is reported."""
        profile = profile_mask(self._half_plane(), (0.0, 0.0), 0.5, 0.25)
        assert profile.c_emp is not None
        assert profile.recursion_constant is None
        assert profile.recursion_holds == []

    def test_ball_must_fit(self) -> None:
        """The first ball has to fit in the stored box."""
        with pytest.raises(GeometryError):
            profile_mask(self._half_plane(), (0.0, 0.0), 3.0, 0.25)
        with pytest.raises(GeometryError):
            profile_mask(self._half_plane(), (0.0, 0.0), 0.5, 0.25, depth=10)

    def test_boundary_point(self) -> None:
        """The nearest boundary cell of a half-plane sits against the interface."""
        point = boundary_point(self._half_plane(), (0.3, 0.01))
        assert point == pytest.approx((-0.025, 0.025))

    def test_line_experiment(self) -> None:
        """The half-line profile matches its closed form and profiles are monotone."""
        report = density_experiment(DensityParams(n=1))
        verdicts = {v.name: v.passed for v in report.verdicts}
        assert verdicts["half_space_closed_form"]
        assert verdicts["profiles_nondecreasing"]
        assert set(verdicts) == {
            "profiles_nondecreasing",
            "half_space_closed_form",
            "half_space_recursion",
            "minimizer_recursion",
            "minimizer_grows",
        }
        assert verdicts["half_space_recursion"]
        assert report.summary["recursion_constant"] == pytest.approx(0.125)
        assert [s["kind"] for s in report.samples] == ["half_space", "minimizer"]


class TestFailcom:
    """Tests for the compactness counterexamples."""

    def test_regime_validation(self) -> None:
        """K must be large against 1/r and the window must leave B_2r free."""
        with pytest.raises(ValidationError):
            FailcomParams(r=1.0, K=5.0)
        with pytest.raises(ValidationError):
            FailcomParams(r=1.0, window_radius=2.0)

    def test_annulus_forcing(self) -> None:
        """The forcing is -K exactly on the annulus."""
        params = FailcomParams(h=0.1)
        _, annulus, g = annulus_problem(params, params.h)
        assert annulus.count > 0
        assert np.all(g.values[annulus.bits] == -params.K)
        assert np.all(g.values[~annulus.bits] == 0.0)

    def test_solve_spacing_defaults_to_h(self) -> None:
        """The solver runs on the h lattice unless a coarser one is asked for."""
        assert FailcomParams().solve_spacing == 0.02
        assert FailcomParams(h=0.04).solve_spacing == 0.04
        assert FailcomParams(solve_h=0.05).solve_spacing == 0.05

    def test_stripes_stay_apart(self) -> None:
        """Distinct stripe sets differ on a set of area about one."""
        geometry, family = stripe_family(3, 1 / 32)
        assert len(family) == 3
        cell = geometry.cell_volume
        for a, b in itertools.combinations(family, 2):
            assert np.count_nonzero(a.bits ^ b.bits) * cell >= 0.4


class TestGamma:
    """Tests for the r to zero sweep."""

    def test_ellipse_constant(self) -> None:
        """Quadrature reproduces the stored ellipse perimeter and the circle."""
        assert ellipse_perimeter(2.0, 1.0) == pytest.approx(ELLIPSE_2_1_PERIMETER, rel=1e-10)
        assert ellipse_perimeter(1.0, 1.0) == pytest.approx(2 * math.pi, rel=1e-10)

    def test_square_perimeter(self) -> None:
        """The square's classical perimeter is four sides."""
        _, exact, extent = shape_and_perimeter(GammaShape.SQUARE, GammaParams(square_side=3.0))
        assert exact == 12.0
        assert extent == 1.5

    def test_disk_sweep(self) -> None:
        """A single-radius disk sweep stays within tolerance."""
        params = GammaParams(shapes=(GammaShape.DISK,), radii=(0.4,), h_ratio=40)
        report = gamma_experiment(params)
        assert [v.name for v in report.verdicts] == ["disk:disk_exact"]
        assert report.passed

    def test_noise_floor_in_summary(self) -> None:
        """Each shape reports the floor under which equal errors still count as decreasing."""
        params = GammaParams(shapes=(GammaShape.DISK,), radii=(0.4,), h_ratio=40, noise_floor=0.01)
        report = gamma_experiment(params)
        assert report.summary["disk"]["noise_floor"] == 0.01
        assert report.config["noise_floor"] == 0.01

    def test_noise_floor_relaxes_decrease(self) -> None:
        """Errors that stall below the floor still count as decreasing."""
        assert _decreasing([0.1, 0.004, 0.004], 0.005)
        assert not _decreasing([0.1, 0.004, 0.004], 0.0)
        assert not _decreasing([0.1, 0.2], 0.05)


class TestOned:
    """Tests for the one-dimensional classification."""

    def test_half_line_shapes(self) -> None:
        """Half-lines continue the boundary data."""
        assert is_half_line(np.array([1, 1, 0, 0], dtype=bool), BoundaryData.LEFT)
        assert not is_half_line(np.array([1, 0, 1, 0], dtype=bool), BoundaryData.LEFT)
        assert is_half_line(np.array([0, 0, 1], dtype=bool), BoundaryData.RIGHT)
        assert is_half_line(np.zeros(3, dtype=bool), BoundaryData.EMPTY)

    @pytest.mark.parametrize("data", list(BoundaryData))
    def test_classify_case(self, data: BoundaryData) -> None:
        """Each data type has its predicted number of minimizers."""
        row = classify_case(5, 1, 0.25, data)
        assert row["all_translates"]
        assert row["half_lines"]
        assert row["solver_agrees"]
        assert row["trivial"]

    def test_classification(self) -> None:
        """A small classification passes every check."""
        report = oned_classification(OnedParams(free_cells=6, r_cells=2, h=0.25, random_cases=3))
        assert report.passed
        assert report.summary["cases"] == 7

    def test_free_cell_default_in_summary(self) -> None:
        """The summary records the free-cell count next to the enumeration cap."""
        report = oned_classification(OnedParams(free_cells=4, r_cells=1, h=0.25, random_cases=0))
        assert report.summary["free_cells"] == 4
        assert report.summary["oracle_cap"] == DEFAULT_ORACLE_CAP
        assert OnedParams().free_cells == 16 < DEFAULT_ORACLE_CAP

    def test_free_cells_capped(self) -> None:
        """More free cells than the enumeration cap are rejected."""
        with pytest.raises(ValidationError):
            OnedParams(free_cells=DEFAULT_ORACLE_CAP + 1)


class TestPlanelikeSweep:
    """Tests for the planelike sweep."""

    def test_vertical_direction(self) -> None:
        """One small case passes the structural checks and M-stability."""
        params = PlanelikeSweepParams(omegas=((0, 1),), radii=(0.5,), spacing_ratio=2, M=2.0)
        report = planelike_sweep(params)
        assert report.passed
        assert "stable" in _names(report.verdicts)
        assert report.summary["exact_stability_cases"] in (0, 1)
        assert "stability_exact" in report.samples[0]
        assert "width_uniform" in _names(report.verdicts)
        assert report.summary["cases"] == 1
        assert report.summary["width_range"] == {"[0, 1]": [report.samples[0]["width"]] * 2}

    def test_eta_sweep(self) -> None:
        """Every forcing amplitude tried keeps the structural properties."""
        params = PlanelikeSweepParams(
            omegas=((0, 1),),
            radii=(0.5,),
            spacing_ratio=2,
            M=2.0,
            check_stability=False,
            etas=(0.2, 0.0),
        )
        report = planelike_sweep(params)
        assert report.passed
        assert report.summary["largest_eta"] == 0.2
        assert report.summary["passing_etas"] == [0.0, 0.2]
        assert [s["eta"] for s in report.samples if s["kind"] == "eta"] == [0.0, 0.2]

    def test_no_eta_sweep(self) -> None:
        """An empty amplitude list skips the sweep."""
        params = PlanelikeSweepParams(
            omegas=((0, 1),), radii=(0.5,), spacing_ratio=2, M=2.0, check_stability=False, etas=()
        )
        report = planelike_sweep(params)
        assert "eta_sweep" not in _names(report.verdicts)
        assert "largest_eta" not in report.summary

    def test_eta_range(self) -> None:
        """Amplitudes above 1/4 are refused."""
        with pytest.raises(ValidationError):
            PlanelikeSweepParams(etas=(0.1, 0.3))


class TestSelftest:
    """Tests for the self-test suites."""

    def test_deterministic(self) -> None:
        """Equal seeds give identical reports."""
        params = SelftestParams(
            seed=5,
            instances=3,
            max_free=8,
            coarea_fields=2,
            coarea_side=8,
            max_levels=4,
            submodular_pairs=3,
            submodular_side=8,
        )
        first = run_selftest(params)
        assert first.passed
        assert first.to_json() == run_selftest(params).to_json()
