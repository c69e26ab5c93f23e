"""Lazy dynamic BFS trees with a round-metered synchronous network simulator."""
from __future__ import annotations

from .congest import CAUSES, CSV_HEADER, Network, RoundLedger
from .decremental import DISTANCE_INCREASE, DecrementalPhase
from .estree import DECREMENTAL, INCREMENTAL, EsTree
from .graph import INF, DynamicGraph, GraphError, bfs, bfs_distances, read_graph, read_updates
from .incremental import COUNTER_FULL, DISTANCE_DECREASE, IncrementalPhase
from .layers import DistributedDecremental, DistributedIncremental, SequentialSSSP

__all__ = [
    "CAUSES", "CSV_HEADER", "COUNTER_FULL", "DECREMENTAL", "DISTANCE_DECREASE", "DISTANCE_INCREASE",
    "DecrementalPhase", "DistributedDecremental", "DistributedIncremental", "DynamicGraph", "EsTree",
    "GraphError", "INCREMENTAL", "INF", "IncrementalPhase", "Network", "RoundLedger", "SequentialSSSP",
    "bfs", "bfs_distances", "read_graph", "read_updates",
]
