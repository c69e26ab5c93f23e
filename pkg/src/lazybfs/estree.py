"""Even-Shiloach shortest-path tree up to a fixed depth.

The tree supports either insertions or deletions for its whole lifetime and
keeps two cost counters: ``work`` (sequential adjacency scans) and ``rounds``
(synchronous level-change waves, one round per wave).  The constant per-update
cost is kept apart in ``updates``.
"""
from __future__ import annotations

import heapq

from .graph import INF, DynamicGraph, bfs

INCREMENTAL = "incremental"
DECREMENTAL = "decremental"


class EsUsageError(RuntimeError):
    """Update direction does not match the tree's mode."""


class EsTree:
    def __init__(self, g: DynamicGraph, s: int, depth_cap: float, mode: str):
        if mode not in (INCREMENTAL, DECREMENTAL):
            raise ValueError(f"unknown mode {mode!r}")
        self.g = g
        self.root = s
        self.depth_cap = depth_cap
        self.mode = mode
        snap = bfs(g, s, depth_cap)
        self.level: list[float] = snap.dist
        self.parent: list[int | None] = snap.parent
        self.children: list[set[int]] = [set() for _ in range(g.n)]
        for v, p in enumerate(self.parent):
            if p is not None:
                self.children[p].add(v)
        self.work = 0
        self.rounds = 0
        self.updates = 0
        if mode == DECREMENTAL:
            # neighbor lists only shrink, so a forward scan pointer per level suffices
            self._scan = [sorted(a) for a in g.adj]
            self._ptr = [0] * g.n

    def distance(self, v: int) -> float:
        return self.level[v]

    def path(self, v: int) -> list[int]:
        if self.level[v] == INF:
            raise KeyError(f"node {v} is not in the tree")
        out = [v]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out

    def _set_parent(self, v: int, p: int | None) -> None:
        old = self.parent[v]
        if old is not None:
            self.children[old].discard(v)
        self.parent[v] = p
        if p is not None:
            self.children[p].add(v)

    # -- incremental -----------------------------------------------------

    def insert(self, u: int, v: int) -> None:
        if self.mode != INCREMENTAL:
            raise EsUsageError("insert() on a decremental Even-Shiloach tree")
        self.updates += 1
        self.work += 1
        lvl = self.level
        if lvl[u] < lvl[v]:
            u, v = v, u
        new = lvl[v] + 1
        if new >= lvl[u] or new > self.depth_cap:
            return
        lvl[u] = new
        self._set_parent(u, v)
        frontier = [u]
        waves = 1
        adj = self.g.adj
        cap = self.depth_cap
        while frontier:
            nxt = []
            for w in frontier:
                self.work += len(adj[w])
                cand = lvl[w] + 1
                if cand > cap:
                    continue
                for x in sorted(adj[w]):
                    if cand < lvl[x]:
                        lvl[x] = cand
                        self._set_parent(x, w)
                        nxt.append(x)
            if nxt:
                waves += 1
            frontier = nxt
        self.rounds += waves

    # -- decremental -----------------------------------------------------

    def delete(self, u: int, v: int) -> None:
        if self.mode != DECREMENTAL:
            raise EsUsageError("delete() on an incremental Even-Shiloach tree")
        self.updates += 1
        self.work += 1
        heap: list[tuple[float, int, int]] = []
        if self.parent[u] == v:
            heapq.heappush(heap, (self.level[u], u, 1))
        if self.parent[v] == u:
            heapq.heappush(heap, (self.level[v], v, 1))
        lvl = self.level
        adj = self.g.adj
        max_wave = 0
        while heap:
            key, w, wave = heapq.heappop(heap)
            if key != lvl[w]:
                continue
            p = self.parent[w]
            if p is not None and p in adj[w] and lvl[p] == lvl[w] - 1:
                continue
            max_wave = max(max_wave, wave)
            found = self._scan_for_parent(w)
            if found is not None:
                self._set_parent(w, found)
                continue
            # no neighbor one level up: raise the level and recheck everything below
            lvl[w] += 1
            self._ptr[w] = 0
            kids = list(self.children[w])
            if lvl[w] > self.depth_cap:
                lvl[w] = INF
                self._set_parent(w, None)
            else:
                heapq.heappush(heap, (lvl[w], w, wave + 1))
            for c in kids:
                if lvl[c] != INF:
                    heapq.heappush(heap, (lvl[c], c, wave + 1))
        self.rounds += max_wave

    def _scan_for_parent(self, w: int) -> int | None:
        target = self.level[w] - 1
        scan = self._scan[w]
        adj_w = self.g.adj[w]
        i = self._ptr[w]
        while i < len(scan):
            x = scan[i]
            self.work += 1
            if x in adj_w and self.level[x] == target:
                self._ptr[w] = i
                return x
            i += 1
        self._ptr[w] = i
        return None

    def check_invariants(self) -> None:
        assert self.level[self.root] == 0
        for v, p in enumerate(self.parent):
            if v == self.root or self.level[v] == INF:
                continue
            assert p is not None and self.g.has_edge(v, p), f"bad parent edge at {v}"
            assert self.level[p] == self.level[v] - 1, f"level gap at {v}"
