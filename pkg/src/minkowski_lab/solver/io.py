"""Loading Dirichlet problems from JSON problem files.

A problem file names its masks and forcing by path, relative to the file
itself::

    {"boundary": "e0.pbm", "free": "free.pbm", "window": "ball:0,0,3",
     "g": "g.csv", "r": 0.5, "capacity_scale": 1048576}
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from minkowski_lab.domain.errors import SerializationError
from minkowski_lab.grid.io import read_field, read_mask, read_window
from minkowski_lab.solver.spec import DEFAULT_CAPACITY_SCALE, DirichletSpec


class ProblemFile(BaseModel):
    """Schema of a Dirichlet problem file."""

    model_config = ConfigDict(extra="forbid")

    boundary: str
    free: str
    window: str = "full"
    g: str | None = None
    r: float = Field(gt=0)
    capacity_scale: int | None = Field(default=None, ge=1)
    enforce_margin: bool = True
    label: str | None = None


def load_problem(
    path: str | Path, default_capacity_scale: int = DEFAULT_CAPACITY_SCALE
) -> DirichletSpec:
    """Read a problem file and the masks it references.

    Args:
        path: JSON problem file
        default_capacity_scale: S used when the file leaves it null

    Returns:
        Validated DirichletSpec

    Raises:
        SerializationError: If the file or a referenced file is malformed
        SpecificationError: If the assembled problem violates its invariants
    """
    path = Path(path)
    if not path.exists():
        raise SerializationError(f"problem file not found: {path}", path=str(path))
    try:
        problem = ProblemFile.model_validate_json(path.read_text())
    except ValidationError as e:
        raise SerializationError(f"invalid problem file: {e}", path=str(path)) from e
    base = path.parent

    boundary = read_mask(base / problem.boundary)
    free = read_mask(base / problem.free)
    if free.geometry != boundary.geometry:
        raise SerializationError("free mask geometry differs from boundary", path=problem.free)

    window = read_window(boundary.geometry, problem.window, base)

    g = None
    if problem.g is not None:
        g = read_field(base / problem.g)

    return DirichletSpec(
        window=window,
        free=np.asarray(free.bits),
        boundary=boundary,
        r=problem.r,
        g=g,
        capacity_scale=problem.capacity_scale or default_capacity_scale,
        enforce_margin=problem.enforce_margin,
        label=problem.label or path.stem,
    )
