"""Exact Dirichlet minimization of F_{r,g} by submodular min-cut."""

from minkowski_lab.solver.brute_force import DEFAULT_ORACLE_CAP, BruteForceResult, brute_force
from minkowski_lab.solver.flow import FlowResult, max_flow
from minkowski_lab.solver.graph import MAX_EXACT_CAPACITY, CutGraph, Encoding, build_graph
from minkowski_lab.solver.io import ProblemFile, load_problem
from minkowski_lab.solver.solve import solve
from minkowski_lab.solver.spec import (
    DEFAULT_CAPACITY_SCALE,
    Canonical,
    DirichletSpec,
    MinimizerResult,
)

__all__ = [
    "DEFAULT_CAPACITY_SCALE",
    "DEFAULT_ORACLE_CAP",
    "MAX_EXACT_CAPACITY",
    "BruteForceResult",
    "Canonical",
    "CutGraph",
    "DirichletSpec",
    "Encoding",
    "FlowResult",
    "MinimizerResult",
    "ProblemFile",
    "brute_force",
    "build_graph",
    "load_problem",
    "max_flow",
    "solve",
]
