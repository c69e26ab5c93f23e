"""Decremental phase machine with tree repair through weighted artificial edges.

After a deletion every node that lost its phase-start parent edge (an orphan)
searches its ``delta``-neighborhood for a node with a smaller phase-start
label and hangs below it through an artificial edge whose weight is the
current hop distance.  If some orphan finds nothing, its distance has grown
by at least ``delta`` and a new phase starts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .congest import local_search
from .graph import INF, DynamicGraph, bfs
from .incremental import COUNTER_FULL, NotCoveredError

DISTANCE_INCREASE = "distance_increase"


@dataclass(frozen=True)
class ArtificialEdge:
    weight: int
    route: tuple[int, ...]  # orphan first, new parent last


class RepairOutcome(NamedTuple):
    repaired: bool
    witness: int | None = None


class DeleteOutcome(NamedTuple):
    rebuilt: bool
    cause: str | None = None
    witness: int | None = None
    orphans: tuple[int, ...] = ()


@dataclass
class DecrementalPhase:
    """Single-layer decremental phase machine over a shared graph.

    The caller applies each deletion to ``g`` before calling :meth:`delete`.
    """

    g: DynamicGraph
    root: int
    kappa: int
    delta: int
    depth_cap: float
    k: int = 0
    phase_index: int = 0
    work: int = 0
    rebuild_log: list[tuple[str, int, int | None]] = field(default_factory=list)

    def __post_init__(self):
        if self.kappa < 1 or self.delta < 1:
            raise ValueError(f"kappa and delta must be >= 1, got {self.kappa}, {self.delta}")
        self.initialize()

    def initialize(self) -> None:
        self.k = 0
        snap = bfs(self.g, self.root, self.depth_cap)
        self.work += self.g.n + 2 * self.g.m
        self.snapshot = snap
        self.label: list[float] = snap.dist
        self.forest_parent: list[int | None] = list(snap.parent)
        self.tree_parent: list[int | None] = list(snap.parent)
        self.artificial: dict[int, ArtificialEdge] = {}
        self.w_dist: list[float] = list(snap.dist)
        self.orphans: list[int] = []
        self.phase_index += 1

    def delete(self, u: int, v: int) -> DeleteOutcome:
        self.k += 1
        if self.k == self.kappa:
            self.rebuild_log.append((COUNTER_FULL, self.phase_index, None))
            self.initialize()
            return DeleteOutcome(True, COUNTER_FULL)
        if self.forest_parent[u] == v:
            self.forest_parent[u] = None
        elif self.forest_parent[v] == u:
            self.forest_parent[v] = None
        out = self.repair_tree()
        if not out.repaired:
            self.rebuild_log.append((DISTANCE_INCREASE, self.phase_index, out.witness))
            orphans = tuple(self.orphans)
            self.initialize()
            return DeleteOutcome(True, DISTANCE_INCREASE, out.witness, orphans)
        return DeleteOutcome(False, orphans=tuple(self.orphans))

    def current_orphans(self) -> list[int]:
        return [x for x in self.snapshot.order
                if x != self.root and self.forest_parent[x] is None]

    def repair_tree(self) -> RepairOutcome:
        """Reconnect every orphan of the phase-start forest, or name a witness."""
        self.orphans = sorted(self.current_orphans())
        found: dict[int, ArtificialEdge] = {}
        for u in self.orphans:
            v, d, route, scanned = local_search(self.g, u, self.delta, self.label)
            self.work += scanned + 1
            if v is None:
                return RepairOutcome(False, u)
            found[u] = ArtificialEdge(d, tuple(route))
        self.artificial = found
        parent = list(self.forest_parent)
        for u, e in found.items():
            parent[u] = e.route[-1]
        self.tree_parent = parent
        w = [INF] * self.g.n
        w[self.root] = 0
        # labels strictly decrease toward the root, so BFS order is top-down
        for x in self.snapshot.order:
            p = parent[x]
            if p is not None:
                w[x] = w[p] + (found[x].weight if x in found else 1)
        self.w_dist = w
        return RepairOutcome(True)

    def distance(self, v: int) -> float:
        return self.w_dist[v]

    def edge_weight(self, v: int) -> int:
        e = self.artificial.get(v)
        return e.weight if e is not None else 1

    def path(self, v: int) -> list[int]:
        """Walk to the root in the current graph, expanding artificial edges."""
        if self.w_dist[v] == INF:
            raise NotCoveredError(f"node {v} is not in the current tree")
        out = [v]
        while out[-1] != self.root:
            x = out[-1]
            e = self.artificial.get(x)
            if e is not None:
                out.extend(e.route[1:])
            else:
                out.append(self.tree_parent[x])
        return out

    def artificial_on_path(self, v: int) -> int:
        count = 0
        while v != self.root:
            if v in self.artificial:
                count += 1
            v = self.tree_parent[v]
        return count

    @property
    def phases(self) -> int:
        return self.phase_index

    def causes(self) -> dict[str, int]:
        out = {COUNTER_FULL: 0, DISTANCE_INCREASE: 0}
        for cause, _, _ in self.rebuild_log:
            out[cause] += 1
        return out

    def check_invariants(self) -> None:
        """Tree-ness, route validity and weight bookkeeping."""
        g = self.g
        for x in self.snapshot.order:
            if x == self.root:
                continue
            p = self.tree_parent[x]
            assert p is not None, f"{x} has no parent after repair"
            assert self.label[p] < self.label[x], f"label does not decrease at {x}->{p}"
            e = self.artificial.get(x)
            if e is None:
                assert g.has_edge(x, p), f"tree edge ({x}, {p}) missing from graph"
            else:
                assert e.route[0] == x and e.route[-1] == p
                assert len(e.route) - 1 == e.weight <= self.delta
                for a, b in zip(e.route, e.route[1:]):
                    assert g.has_edge(a, b), f"route edge ({a}, {b}) missing"
            assert self.w_dist[x] == self.w_dist[p] + self.edge_weight(x)
