"""Mask and field serialization.

Masks are stored as binary PBM (P4) images with a JSON sidecar holding the
geometry and exterior rule; scalar fields as row-major CSV with the same
sidecar. The image height is the product of all leading axes, the width is
the last axis, so 1D and 3D masks fit the 2D format.

All writers go through ``atomic_write_bytes``: data lands in a temporary
file that is renamed over the target.
"""

from __future__ import annotations

import io
import logging
import math
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ValidationError

from minkowski_lab.domain.errors import SerializationError
from minkowski_lab.grid.geometry import ExtensionRule, GridGeometry
from minkowski_lab.grid.mask import BinaryMask, FieldExtension, ScalarField
from minkowski_lab.grid.window import Window

logger = logging.getLogger(__name__)


class Sidecar(BaseModel):
    """JSON companion of a mask or field file."""

    geometry: GridGeometry
    extension: ExtensionRule | None = None
    field_extension: FieldExtension | None = None


def sidecar_path(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def atomic_write_bytes(path: str | Path, data: bytes) -> Path:
    """Write ``data`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    with open(tmp_path, "wb") as f:
        f.write(data)
    tmp_path.replace(path)
    return path


def atomic_write_text(path: str | Path, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def _image_dims(geometry: GridGeometry) -> tuple[int, int]:
    return math.prod(geometry.shape[:-1]), geometry.shape[-1]


def encode_p4(mask: BinaryMask) -> bytes:
    """P4 bytes of the stored window: 1 bits are set cells."""
    height, width = _image_dims(mask.geometry)
    rows = np.packbits(mask.bits.reshape(height, width), axis=1, bitorder="big")
    header = f"P4\n{width} {height}\n".encode("ascii")
    return header + rows.tobytes()


def decode_p4(data: bytes, geometry: GridGeometry) -> np.ndarray:
    """Stored bits from P4 bytes, reshaped to the geometry."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise SerializationError("truncated P4 header")
        tokens.append(data[start:pos])
    pos += 1
    if tokens[0] != b"P4":
        raise SerializationError(f"not a P4 bitmap (magic {tokens[0]!r})")
    width, height = int(tokens[1]), int(tokens[2])
    if (height, width) != _image_dims(geometry):
        raise SerializationError(
            f"bitmap is {width}x{height}, sidecar geometry {geometry.shape} disagrees"
        )
    row_bytes = (width + 7) // 8
    payload = np.frombuffer(data, dtype=np.uint8, count=row_bytes * height, offset=pos)
    bits = np.unpackbits(payload.reshape(height, row_bytes), axis=1, count=width, bitorder="big")
    return bits.astype(bool).reshape(geometry.shape)


def _read_sidecar(path: Path) -> Sidecar:
    car = sidecar_path(path)
    if not car.exists():
        raise SerializationError(f"missing sidecar {car}", path=str(car))
    try:
        return Sidecar.model_validate_json(car.read_text())
    except ValidationError as e:
        raise SerializationError(f"invalid sidecar: {e}", path=str(car)) from e


def write_mask(path: str | Path, mask: BinaryMask) -> Path:
    """Write a mask as P4 plus JSON sidecar."""
    path = Path(path)
    atomic_write_bytes(path, encode_p4(mask))
    sidecar = Sidecar(geometry=mask.geometry, extension=mask.extension)
    atomic_write_text(sidecar_path(path), sidecar.model_dump_json(indent=2))
    logger.debug("Mask written", extra={"path": str(path), "cells": mask.count})
    return path


def read_mask(path: str | Path) -> BinaryMask:
    """Read a mask written by ``write_mask``.

    Raises:
        SerializationError: On a missing file, bad header, or bad sidecar
    """
    path = Path(path)
    if not path.exists():
        raise SerializationError(f"mask file not found: {path}", path=str(path))
    sidecar = _read_sidecar(path)
    bits = decode_p4(path.read_bytes(), sidecar.geometry)
    extension = sidecar.extension or ExtensionRule.constant_outside()
    return BinaryMask(sidecar.geometry, bits, extension)


def write_field(path: str | Path, field: ScalarField) -> Path:
    """Write a scalar field as CSV (row-major) plus JSON sidecar."""
    path = Path(path)
    height, width = _image_dims(field.geometry)
    buffer = io.StringIO()
    np.savetxt(buffer, field.values.reshape(height, width), delimiter=",", fmt="%.17g")
    atomic_write_text(path, buffer.getvalue())
    sidecar = Sidecar(geometry=field.geometry, field_extension=field.extension)
    atomic_write_text(sidecar_path(path), sidecar.model_dump_json(indent=2))
    return path


def read_field(path: str | Path) -> ScalarField:
    """Read a field written by ``write_field``."""
    path = Path(path)
    if not path.exists():
        raise SerializationError(f"field file not found: {path}", path=str(path))
    sidecar = _read_sidecar(path)
    try:
        values = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as e:
        raise SerializationError(f"malformed CSV: {e}", path=str(path)) from e
    if values.size != sidecar.geometry.cell_count:
        raise SerializationError(
            f"CSV holds {values.size} values, geometry needs {sidecar.geometry.cell_count}",
            path=str(path),
        )
    extension = sidecar.field_extension or FieldExtension.ZERO
    return ScalarField(sidecar.geometry, values.reshape(sidecar.geometry.shape), extension)


def read_window(geometry: GridGeometry, text: str, base: str | Path | None = None) -> Window:
    """Window from ``full``/``ball:..``/``box:..`` text or from a mask file path.

    Relative mask paths resolve against ``base`` when given.
    """
    if text == "full" or text.startswith(("ball:", "box:")):
        return Window.parse(geometry, text)
    path = Path(base) / text if base is not None else Path(text)
    mask = read_mask(path)
    if mask.geometry != geometry:
        raise SerializationError("window mask geometry differs from the data", path=str(path))
    return Window.from_mask(mask, label=text)
