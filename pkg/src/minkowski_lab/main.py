"""Command-line entry point for the laboratory.

Usage:
    minkowski-lab perimeter --mask disk.pbm --r 0.5 --window full
    minkowski-lab solve --spec problem.json --canonical minimal --out results/
    minkowski-lab planelike --omega 1,2 --r 0.5 --M 8 --eta 0.05 --g checkerboard --out dir/
    minkowski-lab experiment failcom --r 1 --K 20 --h 0.02
    minkowski-lab selftest

Results are printed to stdout as JSON; logs go to stderr. Exit codes: 0 on
success, 2 on invalid input, 3 when an experiment or selftest verdict fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import structlog
from pydantic import ValidationError

from minkowski_lab.core.config import LabConfig, load_config
from minkowski_lab.domain.errors import CertificateError, LabError
from minkowski_lab.energy.perimeter import energy, oscillation_count, perimeter_r
from minkowski_lab.experiments.factory import ExperimentConfig, ExperimentType, params_type
from minkowski_lab.experiments.runner import ReportWriter, run_experiments
from minkowski_lab.experiments.types import Report
from minkowski_lab.grid.io import (
    atomic_write_text,
    read_field,
    read_mask,
    read_window,
    write_field,
    write_mask,
)
from minkowski_lab.grid.mask import ScalarField
from minkowski_lab.planelike.construct import construct_planelike, m_stability
from minkowski_lab.planelike.direction import parse_omega, rational_basis
from minkowski_lab.planelike.strip import PeriodicForcing, StripSpec
from minkowski_lab.solver.graph import Encoding
from minkowski_lab.solver.io import load_problem
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import Canonical

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_FAILED = 3

# Flags that map onto experiment parameters of the same name.
_EXPERIMENT_FLAGS = ("r", "h", "K", "M", "eta")

logger = logging.getLogger(__name__)


def setup_logging(level: str, log_file: str | None = None, json_output: bool = False) -> None:
    """Configure logging for the application.

    Module code logs through the standard library with ``extra`` fields;
    structlog renders those records as key/value pairs or JSON lines.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        log_file: Optional file to write logs to
        json_output: Render one JSON object per record
    """
    renderer: structlog.types.Processor
    if json_output:
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    formatter = structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.ExtraAdder(),
        ],
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            renderer,
        ],
    )

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper()))


def _ranged_float(
    name: str, low: float, high: float | None = None, inclusive_low: bool = False
) -> Callable[[str], float]:
    """argparse type accepting floats in (low, high] (or [low, high])."""
    bound = f"[{low:g}" if inclusive_low else f"({low:g}"
    expected = f"{bound}, {high:g}]" if high is not None else f"{bound}, inf)"

    def parse(text: str) -> float:
        try:
            value = float(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"{name} expects a number in {expected}") from e
        too_low = value < low if inclusive_low else value <= low
        if too_low or (high is not None and value > high):
            raise argparse.ArgumentTypeError(
                f"{name} must lie in {expected}, got {value:g}"
            )
        return value

    return parse


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text!r}") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", "-c", type=str, help="Path to configuration file")
    common.add_argument(
        "--log-level",
        "-l",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level (overrides config)",
    )
    common.add_argument("--log-file", type=str, help="Log file path")
    common.add_argument("--log-json", action="store_true", help="Render logs as JSON lines")

    parser = argparse.ArgumentParser(
        prog="minkowski-lab",
        description="Grid laboratory for nonlocal Minkowski perimeters",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    radius = _ranged_float("--r", 0.0)
    spacing = _ranged_float("--h", 0.0)

    p = commands.add_parser("perimeter", parents=[common], help="Evaluate Per_r of a mask")
    p.add_argument("--mask", required=True, help="P4 mask with JSON sidecar")
    p.add_argument("--r", type=radius, required=True, help="Radius, > 0")
    p.add_argument("--window", default="full", help="full, ball:c..,R, box:lo..,hi.. or mask path")

    p = commands.add_parser("energy", parents=[common], help="Evaluate F_{r,g} of a mask")
    p.add_argument("--mask", required=True, help="P4 mask with JSON sidecar")
    p.add_argument("--r", type=radius, required=True, help="Radius, > 0")
    p.add_argument("--g", help="Forcing field CSV with JSON sidecar")
    p.add_argument("--window", default="full", help="full, ball:c..,R, box:lo..,hi.. or mask path")

    p = commands.add_parser("solve", parents=[common], help="Exact Dirichlet minimizer")
    p.add_argument("--spec", required=True, help="JSON problem file")
    p.add_argument(
        "--canonical", choices=[c.value for c in Canonical], default=Canonical.MINIMAL.value
    )
    p.add_argument("--encoding", choices=[e.value for e in Encoding], help="Graph encoding")
    p.add_argument("--out", help="Directory for the minimizer mask and result.json")

    p = commands.add_parser("planelike", parents=[common], help="Planelike strip minimizer")
    p.add_argument("--omega", required=True, help="Rational direction, e.g. 1,2")
    p.add_argument("--r", type=radius, required=True, help="Radius, > 0")
    p.add_argument("--h", type=spacing, help="Lattice spacing (default r / spacing_ratio)")
    p.add_argument("--M", type=_ranged_float("--M", 2.0, inclusive_low=True), help="M >= 2")
    p.add_argument(
        "--eta", type=_ranged_float("--eta", 0.0, 0.25, inclusive_low=True), help="sup |g|"
    )
    p.add_argument(
        "--g",
        "--forcing",
        dest="g",
        help="Medium: checkerboard, cosine, zero or a unit-cell field CSV with JSON sidecar",
    )
    p.add_argument("--stability", action="store_true", help="Also compare against 2M")
    p.add_argument("--out", help="Directory for the mask, census.json and width.json")

    p = commands.add_parser("experiment", parents=[common], help="Run seeded experiments")
    p.add_argument(
        "name", choices=[t.value for t in ExperimentType] + ["all"], help="Experiment to run"
    )
    p.add_argument("--r", type=radius, help="Radius, > 0")
    p.add_argument("--h", type=spacing, help="Lattice spacing, > 0")
    p.add_argument("--K", type=_ranged_float("--K", 0.0), help="Forcing magnitude, > 0")
    p.add_argument("--M", type=_ranged_float("--M", 2.0, inclusive_low=True), help="M >= 2")
    p.add_argument(
        "--eta", type=_ranged_float("--eta", 0.0, 0.25, inclusive_low=True), help="sup |g|"
    )
    p.add_argument("--seed", type=int, help="Random seed")
    p.add_argument("--jobs", type=_positive_int, help="Worker threads, >= 1")
    p.add_argument("--out", help="Directory for JSON/CSV reports")

    p = commands.add_parser("convert", parents=[common], help="Convert between mask and field")
    p.add_argument("input", help="Input .pbm mask or .csv field")
    p.add_argument("output", help="Output .pbm mask or .csv field")
    p.add_argument("--threshold", type=float, default=0.0, help="Field to mask: keep u > t")
    p.add_argument("--value", type=float, default=1.0, help="Mask to field: value on the set")

    p = commands.add_parser("selftest", parents=[common], help="Oracle and coarea suites")
    p.add_argument("--seed", type=int, help="Random seed")
    p.add_argument("--out", help="Directory for the JSON report")

    return parser


def build_config(args: argparse.Namespace) -> LabConfig:
    """Build configuration from file and command line args.

    Args:
        args: Parsed command line arguments

    Returns:
        Merged configuration
    """
    config = load_config(args.config)

    if args.log_level:
        config.log_level = args.log_level

    if args.log_file:
        config.log_file = args.log_file

    if args.log_json:
        config.log_json = True

    return config


def _emit(payload: Any) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def cmd_perimeter(args: argparse.Namespace, _config: LabConfig) -> int:
    mask = read_mask(args.mask)
    window = read_window(mask.geometry, args.window)
    _emit(
        {
            "mask": args.mask,
            "window": window.label,
            "r": args.r,
            "h": mask.geometry.spacing,
            "osc_count": oscillation_count(mask, window, args.r),
            "per_r": perimeter_r(mask, window, args.r),
        }
    )
    return EXIT_OK


def cmd_energy(args: argparse.Namespace, config: LabConfig) -> int:
    mask = read_mask(args.mask)
    window = read_window(mask.geometry, args.window)
    g = read_field(args.g) if args.g else None
    breakdown = energy(mask, g, window, args.r, capacity_scale=config.solver.capacity_scale)
    _emit(breakdown.model_dump(mode="json"))
    return EXIT_OK


def _write_json(path: Path, payload: Any) -> Path:
    return atomic_write_text(path, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def cmd_solve(args: argparse.Namespace, config: LabConfig) -> int:
    spec = load_problem(args.spec, default_capacity_scale=config.solver.capacity_scale)
    encoding = Encoding(args.encoding) if args.encoding else config.solver.encoding
    result = solve(
        spec,
        Canonical(args.canonical),
        encoding=encoding,
        stencil_cap=config.grid.stencil_cap,
    )
    payload: dict[str, Any] = {
        "label": spec.label,
        "canonical": result.canonical.value,
        "energy": result.energy.model_dump(mode="json"),
        "flow_value": result.flow_value,
        "node_count": result.node_count,
        "arc_count": result.arc_count,
        "free_cells": spec.free_count,
        "set_cells": result.mask.count,
    }
    if args.out:
        out = Path(args.out)
        name = f"{spec.label}.{result.canonical.value}.pbm"
        payload["mask"] = str(write_mask(out / name, result.mask))
        payload["result"] = str(out / "result.json")
        _write_json(out / "result.json", payload)
    _emit(payload)
    return EXIT_OK


def strip_medium(
    text: str | None, default: PeriodicForcing, eta: float | None
) -> tuple[PeriodicForcing, tuple[float, ...] | None, float | None]:
    """Forcing kind, unit-cell samples and eta from a ``--g`` value.

    A built-in medium name selects that medium. Anything else is read as a
    unit-cell field CSV; without an explicit eta its sup norm is used.
    """
    if text is None:
        return default, None, eta
    builtin = {f.value: f for f in PeriodicForcing if f != PeriodicForcing.CUSTOM}
    if text in builtin:
        return builtin[text], None, eta
    values = read_field(text).values
    if eta is None:
        eta = float(np.abs(values).max(initial=0.0))
    return PeriodicForcing.CUSTOM, tuple(float(v) for v in values.ravel()), eta


def cmd_planelike(args: argparse.Namespace, config: LabConfig) -> int:
    defaults = config.planelike
    direction = rational_basis(parse_omega(args.omega))
    forcing, cell_values, eta = strip_medium(args.g, defaults.forcing, args.eta)
    strip = StripSpec(
        direction=direction,
        M=args.M if args.M is not None else defaults.M,
        r=args.r,
        h=args.h if args.h is not None else args.r / defaults.spacing_ratio,
        eta=eta if eta is not None else defaults.eta,
        forcing=forcing,
        capacity_scale=config.solver.capacity_scale,
        label=f"strip:{args.omega}",
        cell_values=cell_values,
    )
    encoding = config.solver.encoding
    result = construct_planelike(strip, encoding)
    census = result.census
    width: dict[str, Any] = {
        "omega": list(direction.omega_int),
        "r": strip.r,
        "h": strip.h,
        "M": strip.M,
        "eta": strip.eta,
        "forcing": strip.forcing.value,
        "width": result.width,
        "sandwich": result.sandwich_ok,
        "periodic": result.periodic_ok,
        "birkhoff": result.birkhoff_ok,
    }
    if args.stability:
        check = m_stability(strip, encoding)
        width["stable"] = check.stable
        width["translation"] = None if check.translation is None else list(check.translation)
        width["rise"] = check.rise
        width["exact"] = check.exact
    census_payload = {
        **census.model_dump(mode="json"),
        "layers_ordered": census.layers_ordered(),
        "identities_hold": census.identities_hold(),
    }
    payload: dict[str, Any] = {
        **width,
        "energy": result.solution.energy.model_dump(mode="json"),
        "layers_ordered": census_payload["layers_ordered"],
        "census": census_payload,
    }
    if args.out:
        out = Path(args.out)
        name = "planelike_" + "_".join(str(c) for c in direction.omega_int) + ".pbm"
        payload["mask"] = str(write_mask(out / name, result.mask))
        payload["census_file"] = str(_write_json(out / "census.json", census_payload))
        payload["width_file"] = str(_write_json(out / "width.json", width))
    _emit(payload)
    return EXIT_OK


def experiment_configs(args: argparse.Namespace, config: LabConfig) -> list[ExperimentConfig]:
    """Experiment configs from the config file with command-line overrides applied.

    Flags only reach experiments whose parameter model has a field of that name.
    """
    names = list(ExperimentType) if args.name == "all" else [ExperimentType(args.name)]
    configs = []
    for experiment_type in names:
        params = config.experiments.params_for(experiment_type.value)
        if args.seed is not None:
            params["seed"] = args.seed
        fields = params_type(experiment_type).model_fields
        for flag in _EXPERIMENT_FLAGS:
            value = getattr(args, flag, None)
            if value is not None and flag in fields:
                params[flag] = value
        configs.append(ExperimentConfig(experiment_type=experiment_type, params=params))
    return configs


def _report_exit(reports: Sequence[Report]) -> int:
    if len(reports) == 1:
        sys.stdout.write(reports[0].to_json())
    else:
        _emit([report.model_dump(mode="json") for report in reports])
    failed = [f"{r.name}:{v.name}" for r in reports for v in r.failed]
    if failed:
        logger.error("Verdicts failed", extra={"failed": failed})
        return EXIT_FAILED
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace, config: LabConfig) -> int:
    configs = experiment_configs(args, config)
    writer = ReportWriter(args.out) if args.out else None
    jobs = args.jobs or config.experiments.jobs
    return _report_exit(run_experiments(configs, jobs=jobs, writer=writer))


def cmd_convert(args: argparse.Namespace, _config: LabConfig) -> int:
    source, target = Path(args.input), Path(args.output)
    kinds = (source.suffix.lower(), target.suffix.lower())
    if kinds[0] == ".pbm":
        mask = read_mask(source)
        if kinds[1] == ".pbm":
            write_mask(target, mask)
        elif kinds[1] == ".csv":
            write_field(target, ScalarField.indicator(mask, args.value))
        else:
            raise LabError(f"cannot convert a mask to {target.suffix!r}; use .pbm or .csv")
    elif kinds[0] == ".csv":
        field = read_field(source)
        if kinds[1] == ".pbm":
            write_mask(target, field.superlevel(args.threshold))
        elif kinds[1] == ".csv":
            write_field(target, field)
        else:
            raise LabError(f"cannot convert a field to {target.suffix!r}; use .pbm or .csv")
    else:
        raise LabError(f"input must be .pbm or .csv, got {source.suffix!r}")
    _emit({"input": str(source), "output": str(target)})
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace, config: LabConfig) -> int:
    params = config.experiments.params_for(ExperimentType.SELFTEST.value)
    if args.seed is not None:
        params["seed"] = args.seed
    writer = ReportWriter(args.out) if args.out else None
    selftest = ExperimentConfig(experiment_type=ExperimentType.SELFTEST, params=params)
    return _report_exit(run_experiments([selftest], writer=writer))


_COMMANDS: dict[str, Callable[[argparse.Namespace, LabConfig], int]] = {
    "perimeter": cmd_perimeter,
    "energy": cmd_energy,
    "solve": cmd_solve,
    "planelike": cmd_planelike,
    "experiment": cmd_experiment,
    "convert": cmd_convert,
    "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, dispatch the subcommand and map errors to exit codes.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed the offending flag
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID

    try:
        config = build_config(args)
    except LabError as e:
        print(f"Error loading configuration: {e}", file=sys.stderr)
        return EXIT_INVALID

    setup_logging(config.log_level, config.log_file, config.log_json)

    try:
        return _COMMANDS[args.command](args, config)
    except CertificateError as e:
        logger.error("Internal consistency failure: %s", e, extra={"context": e.context})
        return EXIT_ERROR
    except LabError as e:
        logger.error("%s", e, extra={"context": e.context})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        print(f"error: invalid {where or 'value'}: {first.get('msg')}", file=sys.stderr)
        return EXIT_INVALID


def main() -> int:
    """Main entry point."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
