"""Rational directions and integer bases of their orthogonal lattices."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import NDArray
from pydantic import field_validator, model_validator
from pydantic.dataclasses import dataclass

from minkowski_lab.domain.errors import GeometryError


def _column_reduce(omega: list[int]) -> tuple[list[int], list[list[int]]]:
    """Unimodular column reduction of omega.

    Returns:
        (u, kernel): omega . u = gcd(omega) > 0 and ``kernel`` spans
        {k : omega . k = 0} over the integers
    """
    n = len(omega)
    v = list(omega)
    unimodular = [[int(i == j) for j in range(n)] for i in range(n)]
    while sum(1 for c in v if c) > 1:
        pivot = min((i for i in range(n) if v[i]), key=lambda i: abs(v[i]))
        for j in range(n):
            if j == pivot or not v[j]:
                continue
            q = v[j] // v[pivot]
            v[j] -= q * v[pivot]
            for row in unimodular:
                row[j] -= q * row[pivot]
    pivot = next(i for i in range(n) if v[i])
    sign = 1 if v[pivot] > 0 else -1
    step = [sign * unimodular[i][pivot] for i in range(n)]
    kernel = [[unimodular[i][j] for i in range(n)] for j in range(n) if j != pivot]
    return step, kernel


def hermite_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form: echelon, positive pivots, reduced above pivots."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    top = 0
    for col in range(n):
        if top >= m:
            break
        while True:
            nonzero = [i for i in range(top, m) if a[i][col]]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(a[i][col]))
            a[top], a[best] = a[best], a[top]
            done = True
            for i in range(top + 1, m):
                if a[i][col]:
                    q = a[i][col] // a[top][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if top < m and a[top][col]:
            if a[top][col] < 0:
                a[top] = [-x for x in a[top]]
            for i in range(top):
                q = a[i][col] // a[top][col]
                a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            top += 1
    return [r for r in a if any(r)]


@dataclass(frozen=True)
class RationalDirection:
    """A direction omega with n - 1 integer vectors spanning its orthogonal lattice.

    ``period_basis`` rows are in Hermite normal form, so each row has a
    positive pivot entry with zeros before it.
    """

    omega_int: tuple[int, ...]
    period_basis: tuple[tuple[int, ...], ...]

    @field_validator("omega_int")
    @classmethod
    def validate_omega(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or not any(v):
            raise ValueError("omega must be a nonzero integer vector")
        if len(v) > 3:
            raise ValueError(f"omega has dimension {len(v)}, at most 3 supported")
        return v

    @model_validator(mode="after")
    def check_basis(self) -> RationalDirection:
        n = len(self.omega_int)
        if len(self.period_basis) != n - 1:
            raise ValueError(f"period basis needs {n - 1} vectors, got {len(self.period_basis)}")
        for k in self.period_basis:
            if len(k) != n or sum(a * b for a, b in zip(k, self.omega_int)) != 0:
                raise ValueError(f"period vector {k} is not orthogonal to {self.omega_int}")
        basis = np.asarray(self.period_basis, dtype=np.float64)
        if n > 1 and np.linalg.matrix_rank(basis) != n - 1:
            raise ValueError("period vectors are linearly dependent")
        return self

    @property
    def dim(self) -> int:
        return len(self.omega_int)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.omega_int))

    @property
    def omega_unit(self) -> NDArray[np.float64]:
        return np.asarray(self.omega_int, dtype=np.float64) / self.norm

    def pivots(self) -> list[int]:
        """Axis of the leading nonzero entry of each period vector."""
        return [next(i for i, c in enumerate(k) if c) for k in self.period_basis]

    def free_axis(self) -> int:
        """The one axis carrying no pivot."""
        pivots = set(self.pivots())
        return next(i for i in range(self.dim) if i not in pivots)

    def step_vector(self) -> tuple[int, ...]:
        """Integer u with omega . u = gcd(omega), the smallest positive rise."""
        return tuple(_column_reduce(list(self.omega_int))[0])

    def projection(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """omega_unit . x for points with trailing axis of length dim."""
        return np.asarray(points) @ self.omega_unit


def rational_basis(omega_int: tuple[int, ...] | list[int]) -> RationalDirection:
    """Integer basis K_1..K_{n-1} of the lattice orthogonal to omega.

    Args:
        omega_int: Nonzero integer vector

    Returns:
        RationalDirection with the basis in Hermite normal form

    Raises:
        GeometryError: If omega is zero or has more than three entries
    """
    omega = [int(c) for c in omega_int]
    if not omega or not any(omega):
        raise GeometryError("omega must be a nonzero integer vector", field="omega")
    if len(omega) > 3:
        raise GeometryError(f"omega has dimension {len(omega)}, at most 3 supported", field="omega")
    basis = hermite_rows(_column_reduce(omega)[1]) if len(omega) > 1 else []
    return RationalDirection(
        omega_int=tuple(omega),
        period_basis=tuple(tuple(k) for k in basis),
    )


def parse_omega(text: str) -> tuple[int, ...]:
    """Parse a comma-separated integer vector such as ``1,2``."""
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as e:
        raise GeometryError(
            f"omega must be comma-separated integers, got {text!r}", field="omega"
        ) from e
