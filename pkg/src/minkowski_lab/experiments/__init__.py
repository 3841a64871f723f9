"""Seeded experiments emitting machine-readable reports."""

from minkowski_lab.experiments.base import Experiment, ExperimentParams
from minkowski_lab.experiments.density import (
    DensityParams,
    boundary_point,
    density_experiment,
    density_profile,
    profile_mask,
)
from minkowski_lab.experiments.factory import (
    ExperimentConfig,
    ExperimentType,
    create_experiment,
    params_type,
    register_experiment,
)
from minkowski_lab.experiments.failcom import FailcomParams, failcom_experiment, stripe_family
from minkowski_lab.experiments.gamma import (
    ELLIPSE_2_1_PERIMETER,
    GammaParams,
    GammaShape,
    ellipse_perimeter,
    gamma_experiment,
    gamma_sweep,
)
from minkowski_lab.experiments.isoperimetry import (
    IsoperimetricParams,
    RelativeIsoperimetricParams,
    isoperimetric_sweep,
    relative_isoperimetric_sweep,
)
from minkowski_lab.experiments.oned import OnedParams, oned_classification
from minkowski_lab.experiments.planelike_sweep import PlanelikeSweepParams, planelike_sweep
from minkowski_lab.experiments.poincare import PoincareParams, pw_sweep
from minkowski_lab.experiments.runner import ReportWriter, run_experiments
from minkowski_lab.experiments.selftest import SelftestParams, run_selftest
from minkowski_lab.experiments.types import DensityProfile, Report, Verdict

__all__ = [
    "ELLIPSE_2_1_PERIMETER",
    "DensityParams",
    "DensityProfile",
    "Experiment",
    "ExperimentConfig",
    "ExperimentParams",
    "ExperimentType",
    "FailcomParams",
    "GammaParams",
    "GammaShape",
    "IsoperimetricParams",
    "OnedParams",
    "PlanelikeSweepParams",
    "PoincareParams",
    "RelativeIsoperimetricParams",
    "Report",
    "ReportWriter",
    "SelftestParams",
    "Verdict",
    "boundary_point",
    "create_experiment",
    "density_experiment",
    "density_profile",
    "ellipse_perimeter",
    "failcom_experiment",
    "gamma_experiment",
    "gamma_sweep",
    "isoperimetric_sweep",
    "oned_classification",
    "params_type",
    "planelike_sweep",
    "profile_mask",
    "pw_sweep",
    "register_experiment",
    "relative_isoperimetric_sweep",
    "run_experiments",
    "run_selftest",
    "stripe_family",
]
