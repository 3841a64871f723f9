"""Tests for constrained periodic minimizers on strips."""

import pytest

from minkowski_lab.planelike.construct import construct_planelike, m_stability
from minkowski_lab.planelike.direction import rational_basis
from minkowski_lab.planelike.strip import PeriodicForcing, StripSpec


def _strip(omega: tuple[int, ...], forcing: PeriodicForcing, eta: float = 0.05) -> StripSpec:
    return StripSpec(
        direction=rational_basis(omega), M=2.0, r=0.5, h=0.5, eta=eta, forcing=forcing
    )


class TestConstructPlanelike:
    """Tests for construct_planelike."""

    def test_flat_without_forcing(self) -> None:
        """With g = 0 the minimal minimizer rests on the lower constraint."""
        result = construct_planelike(_strip((0, 1), PeriodicForcing.ZERO))
        assert result.width == pytest.approx(0.5)
        assert result.sandwich_ok
        assert result.periodic_ok
        assert result.birkhoff_ok

    @pytest.mark.parametrize("omega", [(0, 1), (1, 1), (1, 2)])
    def test_checkerboard_diagnostics(self, omega: tuple[int, int]) -> None:
        """The minimal minimizer is periodic, ordered and within the constraint."""
        result = construct_planelike(_strip(omega, PeriodicForcing.CHECKERBOARD))
        assert result.sandwich_ok
        assert result.periodic_ok
        assert result.birkhoff_ok
        assert 0.0 < result.width <= 4.0
        assert result.census.identities_hold()
        assert result.census.monotone

    def test_three_dimensional(self) -> None:
        """Strips work over a rational direction in three dimensions."""
        strip = StripSpec(
            direction=rational_basis((0, 0, 1)),
            M=2.0,
            r=0.5,
            h=0.5,
            forcing=PeriodicForcing.COSINE,
        )
        result = construct_planelike(strip)
        assert result.sandwich_ok
        assert result.birkhoff_ok
        assert result.periodic_ok


class TestMStability:
    """Tests for the M versus 2M comparison."""

    def test_stable_without_forcing(self) -> None:
        """Both flat minimizers agree up to a lattice translation."""
        check = m_stability(_strip((0, 1), PeriodicForcing.ZERO))
        assert check.stable
        assert check.translation is not None
        assert check.rise is not None

    def test_flat_minimizers_need_translation(self) -> None:
        """Without forcing the minimal minimizers sit on their own lower constraints."""
        check = m_stability(_strip((0, 1), PeriodicForcing.ZERO))
        assert check.translation != (0, 0)
        assert check.rise is not None and check.rise > 0
        assert not check.exact

    @pytest.mark.parametrize("omega", [(0, 1), (1, 1)])
    def test_exact_means_no_translation(self, omega: tuple[int, int]) -> None:
        """The exact flag is set precisely when no translation was needed."""
        check = m_stability(_strip(omega, PeriodicForcing.CHECKERBOARD))
        untranslated = check.translation is not None and not any(check.translation)
        assert check.exact == untranslated
        assert check.stable or not check.exact
