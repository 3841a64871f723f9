"""Per_r and F_{r,g} evaluation, coarea and submodularity checks."""

from minkowski_lab.energy.coarea import (
    CoareaCheck,
    coarea_check,
    oscillation_integral,
    window_extremes,
)
from minkowski_lab.energy.perimeter import (
    EnergyBreakdown,
    energy,
    oscillation_count,
    perimeter_r,
    quantize_forcing,
    scaled_energy,
)
from minkowski_lab.energy.submodularity import submodularity_slack, submodularity_slack_count

__all__ = [
    "CoareaCheck",
    "EnergyBreakdown",
    "coarea_check",
    "energy",
    "oscillation_integral",
    "oscillation_count",
    "perimeter_r",
    "quantize_forcing",
    "scaled_energy",
    "submodularity_slack",
    "submodularity_slack_count",
    "window_extremes",
]
