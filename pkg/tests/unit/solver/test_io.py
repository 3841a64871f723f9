"""Tests for problem-file loading."""

import json
from pathlib import Path

import numpy as np
import pytest

from minkowski_lab.domain.errors import SerializationError, SpecificationError
from minkowski_lab.grid.geometry import GridGeometry
from minkowski_lab.grid.io import write_field, write_mask
from minkowski_lab.grid.mask import BinaryMask, ScalarField
from minkowski_lab.solver.io import load_problem
from minkowski_lab.solver.solve import solve

GEOMETRY = GridGeometry(dim=2, shape=(7, 7), spacing=1.0)


@pytest.fixture
def problem_dir(tmp_path: Path) -> Path:
    """Directory with a boundary, a free region and a forcing field."""
    free = np.zeros(GEOMETRY.shape, dtype=bool)
    free[2:5, 2:5] = True
    write_mask(tmp_path / "masks" / "boundary.pbm", BinaryMask.empty(GEOMETRY))
    write_mask(tmp_path / "masks" / "free.pbm", BinaryMask.empty(GEOMETRY).with_bits(free))
    write_field(tmp_path / "masks" / "g.csv", ScalarField.constant(GEOMETRY, -10.0))
    return tmp_path


def _write_problem(directory: Path, **fields: object) -> Path:
    path = directory / "problem.json"
    path.write_text(json.dumps(fields))
    return path


class TestLoadProblem:
    """Tests for load_problem."""

    def test_relative_paths(self, problem_dir: Path) -> None:
        """Mask paths resolve against the problem file's directory."""
        path = _write_problem(
            problem_dir,
            boundary="masks/boundary.pbm",
            free="masks/free.pbm",
            g="masks/g.csv",
            r=1.0,
        )
        spec = load_problem(path)
        assert spec.free_count == 9
        assert spec.label == "problem"
        assert spec.capacity_scale == 2**20
        assert solve(spec).mask.count == 9

    def test_explicit_fields(self, problem_dir: Path) -> None:
        """Label, capacity scale and window are read from the file."""
        path = _write_problem(
            problem_dir,
            boundary="masks/boundary.pbm",
            free="masks/free.pbm",
            r=1.0,
            capacity_scale=16,
            window="box:0,0,7,7",
            label="block",
        )
        spec = load_problem(path, default_capacity_scale=64)
        assert spec.capacity_scale == 16
        assert spec.label == "block"
        assert spec.window.count == 49

    def test_window_mask_path(self, problem_dir: Path) -> None:
        """A window may be given as a mask file."""
        write_mask(problem_dir / "masks" / "window.pbm", BinaryMask.full(GEOMETRY))
        path = _write_problem(
            problem_dir,
            boundary="masks/boundary.pbm",
            free="masks/free.pbm",
            window="masks/window.pbm",
            r=1.0,
        )
        assert load_problem(path).window.count == 49

    def test_missing_file(self, tmp_path: Path) -> None:
        """A missing problem file is a serialization error."""
        with pytest.raises(SerializationError):
            load_problem(tmp_path / "absent.json")

    def test_unknown_key(self, problem_dir: Path) -> None:
        """Unknown keys are rejected."""
        path = _write_problem(
            problem_dir, boundary="masks/boundary.pbm", free="masks/free.pbm", r=1.0, radius=2
        )
        with pytest.raises(SerializationError):
            load_problem(path)

    def test_nonpositive_radius(self, problem_dir: Path) -> None:
        """The radius must be positive."""
        path = _write_problem(
            problem_dir, boundary="masks/boundary.pbm", free="masks/free.pbm", r=0.0
        )
        with pytest.raises(SerializationError):
            load_problem(path)

    def test_margin_violation(self, problem_dir: Path) -> None:
        """A free region reaching the window edge fails validation."""
        edge = np.zeros(GEOMETRY.shape, dtype=bool)
        edge[0, 3] = True
        write_mask(problem_dir / "masks" / "edge.pbm", BinaryMask.empty(GEOMETRY).with_bits(edge))
        path = _write_problem(
            problem_dir, boundary="masks/boundary.pbm", free="masks/edge.pbm", r=1.0
        )
        with pytest.raises(SpecificationError):
            load_problem(path)
