"""Dynamic undirected unweighted graph plus the exact BFS oracle.

Distances use ``INF`` for nodes that are unreached or lie beyond a depth cap.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

INF = float("inf")


class GraphError(ValueError):
    """Bad node id, self-loop, or malformed graph input."""


class DynamicGraph:
    """Simple undirected graph on nodes ``0..n-1`` with O(1) edge updates."""

    __slots__ = ("n", "adj", "m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise GraphError(f"graph needs at least one node, got n={n}")
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.m = 0
        for u, v in edges:
            self.insert_edge(u, v)

    def _check(self, u: int, v: int) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
        if u == v:
            raise GraphError(f"self-loop ({u}, {u}) rejected")

    def insert_edge(self, u: int, v: int) -> bool:
        self._check(u, v)
        if v in self.adj[u]:
            return False
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.m += 1
        return True

    def delete_edge(self, u: int, v: int) -> bool:
        self._check(u, v)
        if v not in self.adj[u]:
            return False
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.m -= 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> list[int]:
        """Neighbors of ``v`` in ascending id order."""
        return sorted(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield u, v

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph.__new__(DynamicGraph)
        g.n = self.n
        g.adj = [set(a) for a in self.adj]
        g.m = self.m
        return g

    def check_invariants(self) -> None:
        total = 0
        for u, nbrs in enumerate(self.adj):
            assert u not in nbrs, f"self-loop at {u}"
            for v in nbrs:
                assert u in self.adj[v], f"asymmetric edge ({u}, {v})"
            total += len(nbrs)
        assert total == 2 * self.m, f"m={self.m} but degree sum {total}"

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, m={self.m})"


@dataclass
class BfsSnapshot:
    """Distances and parents of a BFS tree from ``root`` truncated at ``depth_cap``."""

    root: int
    depth_cap: float
    dist: list[float]
    parent: list[int | None]
    # nodes in BFS order, root first
    order: list[int] = field(default_factory=list)

    def reached(self, v: int) -> bool:
        return self.dist[v] != INF

    def path(self, v: int) -> list[int]:
        if self.dist[v] == INF:
            raise KeyError(f"node {v} is not covered by the snapshot")
        out = [v]
        while out[-1] != self.root:
            out.append(self.parent[out[-1]])
        return out

    @property
    def depth(self) -> int:
        """Largest finite distance in the snapshot."""
        return int(self.dist[self.order[-1]]) if self.order else 0


def bfs(g: DynamicGraph, s: int, depth_cap: float = INF) -> BfsSnapshot:
    """Exact BFS from ``s`` up to ``depth_cap``.

    Each reached non-root node's parent is its smallest-id neighbor one level
    closer to ``s``.
    """
    if not 0 <= s < g.n:
        raise GraphError(f"root {s} out of range for n={g.n}")
    if depth_cap < 0:
        raise GraphError(f"negative depth cap {depth_cap}")
    dist: list[float] = [INF] * g.n
    parent: list[int | None] = [None] * g.n
    dist[s] = 0
    order = [s]
    frontier = [s]
    d = 0
    while frontier and d < depth_cap:
        d += 1
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if dist[w] == INF:
                    dist[w] = d
                    nxt.append(w)
        nxt.sort()
        for w in nxt:
            parent[w] = min(x for x in g.adj[w] if dist[x] == d - 1)
        order.extend(nxt)
        frontier = nxt
    return BfsSnapshot(root=s, depth_cap=depth_cap, dist=dist, parent=parent, order=order)


def bfs_distances(g: DynamicGraph, s: int, depth_cap: float = INF) -> list[float]:
    """Distances only; cheaper than :func:`bfs` when parents are not needed."""
    dist: list[float] = [INF] * g.n
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        du = dist[u]
        if du >= depth_cap:
            continue
        for w in g.adj[u]:
            if dist[w] == INF:
                dist[w] = du + 1
                q.append(w)
    return dist


def sum_of_distances(snapshot: BfsSnapshot) -> int:
    return int(sum(d for d in snapshot.dist if d != INF))


def eccentricity(g: DynamicGraph, s: int) -> int:
    """Largest finite distance from ``s``; the diameter proxy used for the root component."""
    return int(max(d for d in bfs_distances(g, s) if d != INF))


# -- file formats -----------------------------------------------------------

def read_graph(path: str | Path) -> DynamicGraph:
    """Read ``n m`` followed by ``m`` lines ``u v``."""
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise GraphError(f"{path}: missing 'n m' header")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise GraphError(f"{path}: header says {m} edges, found {len(body) / 2:g}")
    g = DynamicGraph(n)
    for i in range(m):
        g.insert_edge(int(body[2 * i]), int(body[2 * i + 1]))
    return g


def write_graph(g: DynamicGraph, path: str | Path) -> None:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_updates(path: str | Path) -> list[tuple[str, int, int]]:
    """Read lines ``I u v`` / ``D u v``."""
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3 or parts[0] not in ("I", "D"):
            raise GraphError(f"{path}:{lineno}: expected 'I u v' or 'D u v', got {line!r}")
        out.append((parts[0], int(parts[1]), int(parts[2])))
    return out


def write_updates(updates: Iterable[tuple[str, int, int]], path: str | Path) -> None:
    Path(path).write_text("".join(f"{op} {u} {v}\n" for op, u, v in updates))
