"""Seeded partially dynamic workloads.

Every family fixes an initial graph and an all-insert or all-delete change
list.  Families with long paths keep the root component's diameter linear in
``n`` so that distance-dependent costs are visible.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .graph import DynamicGraph

INCREMENTAL = "incremental"
DECREMENTAL = "decremental"
FAMILIES = ("path_with_chords", "er_random", "grid", "star_chain", "long_cycle")


class WorkloadError(ValueError):
    """The requested workload cannot be generated."""


@dataclass
class Workload:
    family: str
    n: int
    seed: int
    direction: str
    edges: list[tuple[int, int]]
    changes: list[tuple[str, int, int]]
    root: int = 0
    params: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return len(self.changes)

    def graph(self) -> DynamicGraph:
        """A fresh copy of the initial graph."""
        return DynamicGraph(self.n, self.edges)

    def check(self) -> None:
        """Direction purity and validity of every change against the evolving graph."""
        op = "I" if self.direction == INCREMENTAL else "D"
        g = self.graph()
        for c, u, v in self.changes:
            if c != op:
                raise WorkloadError(f"{self.direction} workload contains {c!r} change")
            ok = g.insert_edge(u, v) if op == "I" else g.delete_edge(u, v)
            if not ok:
                raise WorkloadError(f"change {c} {u} {v} is not valid at its position")


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _path(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _chords(n: int, spans) -> list[tuple[int, int]]:
    return [(i, i + s) for s in spans for i in range(n - s)]


def _grid_shape(n: int) -> tuple[int, int]:
    rows = max(1, math.isqrt(n))
    return rows, n // rows


def _grid_edges(n: int) -> list[tuple[int, int]]:
    rows, cols = _grid_shape(n)
    out = []
    for r in range(rows):
        for c in range(cols):
            x = r * cols + c
            if c + 1 < cols:
                out.append((x, x + 1))
            if r + 1 < rows:
                out.append((x, x + cols))
    # leftover nodes hang off the last row as a tail
    for x in range(rows * cols, n):
        out.append((x - 1, x))
    return out


def _star_chain(n: int, hubs: int) -> list[tuple[int, int]]:
    hubs = max(1, min(hubs, n))
    out = _path(hubs)
    for x in range(hubs, n):
        out.append((x % hubs, x))
    return out


def _sample_absent(rng: random.Random, n: int, present: set, pool: list | None, q: int) -> list:
    """``q`` distinct absent pairs, from ``pool`` if given, else uniformly."""
    if pool is not None:
        cand = [e for e in pool if e not in present]
        if len(cand) < q:
            raise WorkloadError(f"only {len(cand)} insertable pairs, asked for {q}")
        return rng.sample(cand, q)
    free = n * (n - 1) // 2 - len(present)
    if free < q:
        raise WorkloadError(f"only {free} absent pairs, asked for {q}")
    out: list = []
    seen = set(present)
    if q > free // 2:
        cand = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in seen]
        return rng.sample(cand, q)
    while len(out) < q:
        e = _norm(*rng.sample(range(n), 2))
        if e not in seen:
            seen.add(e)
            out.append(e)
    return out


def _er_edges(rng: random.Random, n: int, m: int) -> list[tuple[int, int]]:
    m = min(m, n * (n - 1) // 2)
    return sorted(_sample_absent(rng, n, set(), None, m))


def gen_workload(family: str, n: int, q: int, seed: int, direction: str = INCREMENTAL,
                 params: dict | None = None) -> Workload:
    """Deterministic workload of ``q`` changes on ``n`` nodes.

    ``params`` may set ``avg_degree`` (er_random), ``hubs`` (star_chain) or
    ``spans`` (path_with_chords / long_cycle chord lengths).
    """
    params = dict(params or {})
    if family not in FAMILIES:
        raise WorkloadError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if direction not in (INCREMENTAL, DECREMENTAL):
        raise WorkloadError(f"unknown direction {direction!r}")
    if n < 2:
        raise WorkloadError("need at least 2 nodes")
    if q < 0:
        raise WorkloadError("q must be non-negative")
    rng = random.Random(f"{family}:{n}:{q}:{seed}:{direction}")
    inc = direction == INCREMENTAL

    if family == "path_with_chords":
        spans = tuple(params.get("spans", (2, 3)))
        if inc:
            edges = _path(n)
            picks = _sample_absent(rng, n, set(edges), _chords(n, spans), q)
        else:
            edges = _path(n) + _chords(n, spans)
            chords = _chords(n, spans)
            picks = _pick_deletions(rng, edges, chords, q)
    elif family == "long_cycle":
        spans = tuple(params.get("spans", (2,)))
        cycle = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
        chords = [_norm(i, (i + s) % n) for s in spans for i in range(n)]
        chords = sorted(set(chords) - set(cycle))
        if inc:
            edges = cycle
            picks = _sample_absent(rng, n, set(edges), chords, q)
        else:
            edges = sorted(set(cycle) | set(chords))
            picks = _pick_deletions(rng, edges, chords, q)
    elif family == "er_random":
        deg = float(params.get("avg_degree", 3.0 if inc else max(6.0, 2.0 * q / n + 4.0)))
        edges = _er_edges(rng, n, int(round(deg * n / 2)))
        if inc:
            picks = _sample_absent(rng, n, set(edges), None, q)
        else:
            picks = _pick_deletions(rng, edges, None, q)
    elif family == "grid":
        edges = _grid_edges(n)
        if inc:
            picks = _sample_absent(rng, n, set(edges), None, q)
        else:
            picks = _pick_deletions(rng, edges, None, q)
    else:  # star_chain
        hubs = int(params.get("hubs", max(2, n // 4)))
        edges = _star_chain(n, hubs)
        if inc:
            picks = _sample_absent(rng, n, set(edges), None, q)
        else:
            picks = _pick_deletions(rng, edges, None, q)

    op = "I" if inc else "D"
    w = Workload(family, n, seed, direction, [_norm(u, v) for u, v in edges],
                 [(op, u, v) for u, v in picks], params=params)
    return w


def _pick_deletions(rng: random.Random, edges: list, preferred: list | None, q: int) -> list:
    """``q`` present edges in deletion order, preferred ones first (shuffled within each group)."""
    if q > len(edges):
        raise WorkloadError(f"only {len(edges)} edges to delete, asked for {q}")
    pref = set(preferred or ())
    first = [e for e in edges if e in pref]
    rest = [e for e in edges if e not in pref]
    rng.shuffle(first)
    rng.shuffle(rest)
    return (first + rest)[:q]
