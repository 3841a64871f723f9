"""Report and profile types shared by all experiments."""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from pydantic import BaseModel, Field


class Verdict(BaseModel):
    """One asserted statement with the value observed and its tolerance."""

    name: str
    passed: bool
    value: float | None = None
    tolerance: float | None = None
    statement: str


class Report(BaseModel):
    """Machine-readable experiment outcome.

    Reports are deterministic in (config, seed): samples are appended in a
    fixed order and serialization sorts keys.
    """

    name: str
    config: dict[str, Any]
    seed: int | None = None
    samples: list[dict[str, Any]] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    verdicts: list[Verdict] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failed(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def check(
        self,
        name: str,
        passed: bool,
        statement: str,
        value: float | None = None,
        tolerance: float | None = None,
    ) -> Verdict:
        """Append a verdict and return it."""
        verdict = Verdict(
            name=name,
            passed=bool(passed),
            value=None if value is None else float(value),
            tolerance=tolerance,
            statement=statement,
        )
        self.verdicts.append(verdict)
        return verdict

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"

    def samples_csv(self) -> str:
        """Flatten samples into CSV with the union of their keys as columns."""
        columns = sorted({key for sample in self.samples for key in sample})
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for sample in self.samples:
            writer.writerow({k: sample.get(k, "") for k in columns})
        return buffer.getvalue()


class DensityProfile(BaseModel):
    """Growth of f(R) = |E intersected with B_R| over radii R_0 + 2kr.

    ``c_emp`` is the largest constant with f(R + 2r) >= f(R) + c f(R)^((n-1)/n)
    over the polynomial regime steps. ``recursion_holds`` checks the same
    steps against the independent ``recursion_constant``. ``exponent`` is
    the log-log slope of f against R; ``ratios`` are consecutive f_k / f_{k-1} while f is below
    ``small_threshold``. ``envelope`` is (f_0^(1/n) + 2 k r c)^n with c =
    ``envelope_slope``, the largest slope keeping it below every f_k.
    """

    center: tuple[float, ...]
    r: float
    dim: int
    radii: list[float]
    values: list[float]
    c_emp: float | None = None
    exponent: float | None = None
    ratios: list[float] = Field(default_factory=list)
    small_threshold: float
    envelope: list[float] = Field(default_factory=list)
    envelope_slope: float | None = None
    recursion_constant: float | None = None
    recursion_holds: list[bool] = Field(default_factory=list)

    @property
    def nondecreasing(self) -> bool:
        return all(b >= a for a, b in zip(self.values, self.values[1:]))
