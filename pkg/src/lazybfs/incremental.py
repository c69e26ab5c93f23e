"""Lazy incremental phase machine.

Keeps the BFS tree from the start of the current phase and answers queries
from it.  A new phase starts after ``kappa`` insertions, or when an inserted
edge shortcuts a node by more than ``delta`` levels of the phase-start tree.
Between phase starts the reported distances overestimate by at most
``kappa * delta``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .graph import INF, BfsSnapshot, DynamicGraph, bfs, bfs_distances

COUNTER_FULL = "counter_full"
DISTANCE_DECREASE = "distance_decrease"


class NotCoveredError(KeyError):
    pass


class RootComponent:
    """Nodes connected to the root.  Under insertions this set only grows."""

    def __init__(self, g: DynamicGraph, s: int):
        self.g = g
        self.root = s
        self.members = {v for v, d in enumerate(bfs_distances(g, s)) if d != INF}
        self.work = 0

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def join(self, u: int, v: int) -> list[tuple[int, int, int]]:
        """Absorb the component attached by the new edge ``(u, v)``.

        Returns ``(node, hops from the attach point, region parent)`` in BFS
        order; the attach point's parent is the old member endpoint.
        """
        a, b = u in self.members, v in self.members
        if a == b:
            return []
        inside, start = (u, v) if a else (v, u)
        out = [(start, 0, inside)]
        hops = {start: 0}
        frontier = [start]
        while frontier:
            nxt = set()
            for x in frontier:
                self.work += len(self.g.adj[x])
                for y in self.g.adj[x]:
                    if y not in hops and y not in self.members:
                        nxt.add(y)
            for y in sorted(nxt):
                hops[y] = hops[frontier[0]] + 1
                par = min(x for x in self.g.adj[y] if hops.get(x) == hops[y] - 1)
                out.append((y, hops[y], par))
            frontier = sorted(nxt)
        self.members.update(hops)
        return out


class InsertOutcome(NamedTuple):
    rebuilt: bool
    cause: str | None = None
    witness: int | None = None
    grafted: int = 0


@dataclass
class RebuildEvent:
    cause: str
    phase_index: int
    witness: int | None = None
    # audit only: capped snapshot and uncapped distances from the start of the phase that just ended
    old_snapshot: BfsSnapshot | None = None
    old_dist: list[float] | None = None


@dataclass
class IncrementalPhase:
    """Single-layer lazy phase machine over a shared, mutable graph.

    The caller applies each insertion to ``g`` before calling :meth:`insert`.
    """

    g: DynamicGraph
    root: int
    kappa: int
    delta: int
    depth_cap: float
    component: RootComponent | None = None
    audit: bool = False
    k: int = 0
    phase_index: int = 0
    rebuild_log: list[RebuildEvent] = field(default_factory=list)

    def __post_init__(self):
        if self.kappa < 1 or self.delta < 1:
            raise ValueError(f"kappa and delta must be >= 1, got {self.kappa}, {self.delta}")
        self._own_component = self.component is None
        if self._own_component:
            self.component = RootComponent(self.g, self.root)
        self.initialize()

    def initialize(self) -> None:
        self.k = 0
        self.snapshot = bfs(self.g, self.root, self.depth_cap)
        self.label = list(self.snapshot.dist)
        self.parent = list(self.snapshot.parent)
        self.start_dist = bfs_distances(self.g, self.root) if self.audit else None
        self.phase_index += 1

    def _restart(self, cause: str, witness: int | None = None) -> InsertOutcome:
        old = (self.snapshot, self.start_dist) if self.audit else (None, None)
        self.rebuild_log.append(RebuildEvent(cause, self.phase_index, witness, *old))
        self.initialize()
        return InsertOutcome(True, cause, witness)

    def insert(self, u: int, v: int, joined: list[tuple[int, int, int]] | None = None) -> InsertOutcome:
        """Process the insertion of ``(u, v)``, already present in ``g``.

        ``joined`` is the output of :meth:`RootComponent.join` for this edge
        when the component is shared; a private component is updated here.
        """
        if self._own_component:
            joined = self.component.join(u, v)
        self.k += 1
        if self.k == self.kappa:
            return self._restart(COUNTER_FULL)
        if joined:
            return InsertOutcome(False, grafted=self.graft(joined))
        lu, lv = self.label[u], self.label[v]
        if lu < lv:
            u, v, lu, lv = v, u, lv, lu
        if lv == INF:
            return InsertOutcome(False)
        # beyond the cap a connected node's phase-start distance is at least cap + 1
        eff = self.depth_cap + 1 if lu == INF else lu
        if eff > lv + self.delta:
            return self._restart(DISTANCE_DECREASE, u)
        return InsertOutcome(False)

    def graft(self, joined: list[tuple[int, int, int]]) -> int:
        """Hang newly connected nodes below the tree by BFS among themselves."""
        attach = joined[0][2]
        base = self.label[attach]
        count = 0
        for node, hops, par in joined:
            lab = base + 1 + hops
            if lab > self.depth_cap:
                continue
            self.label[node] = lab
            self.parent[node] = par
            count += 1
        return count

    def distance(self, v: int) -> float:
        return self.label[v]

    def path(self, v: int) -> list[int]:
        if self.label[v] == INF:
            raise NotCoveredError(f"node {v} is not covered by the current phase")
        out = [v]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out

    @property
    def phases(self) -> int:
        return self.phase_index

    def causes(self) -> dict[str, int]:
        out = {COUNTER_FULL: 0, DISTANCE_DECREASE: 0}
        for ev in self.rebuild_log:
            out[ev.cause] += 1
        return out


def distance_sum_drop_bound(delta: int) -> int:
    """Guaranteed drop of the capped distance sum when a node gains ``delta`` levels."""
    h = delta // 2
    return h * (delta - h - 1)
