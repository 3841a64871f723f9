"""Exact integer max-flow and canonical min-cut extraction.

Flows run on PyMaxflow's double-precision Boykov-Kolmogorov graph. All
capacities are integers and every intermediate residual is bounded by the
sum of finite capacities, so the arithmetic is exact while that sum stays
below 2^52 (checked when the graph is built).

When the search ends, the sink tree is exactly the set of nodes that still
reach the sink in the residual graph. Nodes outside it (free nodes are
reported on the source segment) form the largest min-cut source side. On the
reversed graph, where source and sink trade places and every arc flips, the
sink tree is the set reachable from the original source: the smallest side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import maxflow
import numpy as np

from minkowski_lab.grid.mask import BoolArray
from minkowski_lab.solver.graph import CutGraph, IntArray

logger = logging.getLogger(__name__)

# Edge from each node in row 0 to the node below it in row 1.
_DOWNWARD = np.array([[0, 0, 0], [0, 0, 0], [0, 1, 0]], dtype=np.float64)


@dataclass(frozen=True, eq=False)
class FlowResult:
    """Max-flow value and one extreme minimum cut.

    ``source_side`` has one entry per graph node: the smallest min-cut source
    side when ``maximal`` is False, the largest one otherwise.
    """

    flow_value: int
    source_side: BoolArray
    maximal: bool = False


def _terminal_caps(graph: CutGraph, terminal: int, other_end: IntArray) -> IntArray:
    """Per-node total capacity of arcs between ``terminal`` and each node."""
    sel = (graph.tails == terminal) if terminal == graph.source else (graph.heads == terminal)
    caps = np.zeros(graph.node_count, dtype=np.int64)
    np.add.at(caps, other_end[sel], graph.caps[sel])
    return caps


def _sink_tree(
    graph: CutGraph,
    source_caps: IntArray,
    sink_caps: IntArray,
    tails: IntArray,
    heads: IntArray,
    caps: IntArray,
) -> tuple[float, BoolArray]:
    """Max flow and sink-tree membership of every node."""
    g = maxflow.Graph[float](graph.node_count, int(caps.size))
    ids = g.add_grid_nodes((graph.node_count,))
    g.add_grid_tedges(ids, source_caps.astype(np.float64), sink_caps.astype(np.float64))
    if caps.size:
        pairs = np.stack([ids[tails], ids[heads]])
        weights = np.stack([caps.astype(np.float64), np.zeros(caps.size)])
        g.add_grid_edges(pairs, weights=weights, structure=_DOWNWARD, symmetric=False)
    value = g.maxflow()
    return float(value), np.asarray(g.get_grid_segments(ids), dtype=bool)


def max_flow(graph: CutGraph, maximal: bool = False) -> FlowResult:
    """Run max-flow and read the requested canonical cut off the residual.

    Args:
        graph: Cut graph whose capacities sum to at most 2^52
        maximal: Return the largest min-cut source side instead of the smallest

    Returns:
        FlowResult with the exact integer flow value
    """
    s, t = graph.source, graph.sink
    from_source = _terminal_caps(graph, s, graph.heads)
    to_sink = _terminal_caps(graph, t, graph.tails)
    direct = (graph.tails == s) & (graph.heads == t)
    inner = (graph.tails != s) & (graph.heads != t)
    tails, heads, caps = graph.tails[inner], graph.heads[inner], graph.caps[inner]
    constant = int(graph.caps[direct].sum())

    if maximal:
        value, reaches_sink = _sink_tree(graph, from_source, to_sink, tails, heads, caps)
        side = ~reaches_sink
    else:
        value, side = _sink_tree(graph, to_sink, from_source, heads, tails, caps)
    side[s] = True
    side[t] = False

    flow_value = int(round(value)) + constant
    logger.debug(
        "Max flow finished",
        extra={"flow": flow_value, "maximal": maximal, "source_side": int(side.sum())},
    )
    return FlowResult(flow_value=flow_value, source_side=side, maximal=maximal)
