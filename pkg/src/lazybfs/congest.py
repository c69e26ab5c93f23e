"""Synchronous round-based network simulator with per-stage round metering.

A run alternates attack stages (one edge change) and recovery stages during
which the topology is static.  Protocols charge the rounds they use to a
``RoundLedger`` under a named cause.  Counter convergecast, delta-floods and
local searches are simulated message by message; BFS construction is executed
as a flood and metered rather than packetised.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .graph import INF, BfsSnapshot, DynamicGraph, bfs, bfs_distances

CAUSES = (
    "bfs_build",
    "convergecast",
    "broadcast_delta",
    "local_search",
    "increase_report",
    "exchange",
    "es_update",
    "graft",
)
CSV_HEADER = ("stage_index", "change_type", "rounds", "messages", "cause_breakdown", "phase_index", "layer_index")
MAX_WORDS = 4


class ProtocolError(RuntimeError):
    pass


@dataclass
class StageRow:
    stage_index: int
    change_type: str
    rounds: int = 0
    messages: int = 0
    causes: dict[str, int] = field(default_factory=dict)
    phase_index: int = 0
    layer_index: int = -1

    def breakdown(self) -> str:
        return ";".join(f"{c}={self.causes[c]}" for c in CAUSES if self.causes.get(c))

    def as_tuple(self) -> tuple:
        return (self.stage_index, self.change_type, self.rounds, self.messages,
                self.breakdown(), self.phase_index, self.layer_index)


class RoundLedger:
    """Rounds and messages per stage.  Stage 0 is preprocessing (type ``P``)."""

    def __init__(self):
        self.rows: list[StageRow] = []
        self._open: StageRow | None = None

    def begin_stage(self, change_type: str) -> StageRow:
        if self._open is not None:
            raise ProtocolError("previous stage still open")
        self._open = StageRow(len(self.rows), change_type)
        return self._open

    def charge(self, cause: str, rounds: int, messages: int = 0) -> None:
        if cause not in CAUSES:
            raise ValueError(f"unknown cause {cause!r}")
        if rounds < 0 or messages < 0:
            raise ValueError("ledger counters are monotone")
        row = self._require_open()
        row.rounds += rounds
        row.messages += messages
        row.causes[cause] = row.causes.get(cause, 0) + rounds

    def add_rounds(self, k: int) -> None:
        """Rounds (or work units) not attributed to a protocol cause."""
        if k < 0:
            raise ValueError("ledger counters are monotone")
        self._require_open().rounds += k

    def count_messages(self, k: int) -> None:
        self._require_open().messages += k

    def end_stage(self, phase_index: int = 0, layer_index: int = -1) -> StageRow:
        row = self._require_open()
        row.phase_index = phase_index
        row.layer_index = layer_index
        self.rows.append(row)
        self._open = None
        return row

    def _require_open(self) -> StageRow:
        if self._open is None:
            raise ProtocolError("no stage open")
        return self._open

    @property
    def current(self) -> StageRow | None:
        return self._open

    @property
    def total_rounds(self) -> int:
        return sum(r.rounds for r in self.rows)

    @property
    def recovery_rounds(self) -> int:
        return sum(r.rounds for r in self.rows if r.change_type != "P")

    @property
    def total_messages(self) -> int:
        return sum(r.messages for r in self.rows)

    def cause_total(self, cause: str) -> int:
        return sum(r.causes.get(cause, 0) for r in self.rows)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for row in self.rows:
                w.writerow(row.as_tuple())


@dataclass(frozen=True)
class Message:
    """A bounded payload: at most ``MAX_WORDS`` integers."""

    payload: tuple[int, ...]

    def check(self, n: int) -> None:
        if len(self.payload) > MAX_WORDS:
            raise ProtocolError(f"message of {len(self.payload)} words exceeds {MAX_WORDS}")
        bound = max(n, 2) ** 3
        for x in self.payload:
            if not isinstance(x, int) or abs(x) > bound:
                raise ProtocolError(f"message word {x!r} does not fit O(log n) bits")


class Network:
    """The communication graph of one simulation plus its ledger."""

    def __init__(self, g: DynamicGraph, ledger: RoundLedger | None = None):
        self.g = g
        self.ledger = ledger if ledger is not None else RoundLedger()
        self.sent = 0

    def send(self, u: int, v: int, payload: tuple[int, ...]) -> Message:
        if not self.g.has_edge(u, v):
            raise ProtocolError(f"send over absent edge ({u}, {v})")
        msg = Message(payload)
        msg.check(self.g.n)
        self.sent += 1
        if self.ledger.current is not None:
            self.ledger.count_messages(1)
        return msg

    def charge(self, cause: str, rounds: int, messages: int = 0) -> None:
        if self.ledger.current is not None:
            self.ledger.charge(cause, rounds, messages)


# -- BFS construction -------------------------------------------------------

def sim_build_bfs(net: Network, s: int, depth_cap: float, cause: str = "bfs_build") -> tuple[BfsSnapshot, int]:
    """Flooding BFS from ``s``; rounds equal the depth actually reached."""
    snap = bfs(net.g, s, depth_cap)
    rounds = snap.depth
    Message((s, rounds)).check(net.g.n)
    messages = sum(net.g.degree(v) for v in snap.order if snap.dist[v] < depth_cap)
    net.charge(cause, rounds, messages)
    return snap, rounds


# -- counter convergecast ---------------------------------------------------

class Convergecast:
    """Aggregated rootward counting along a tree.

    ``parent(x)`` gives the next tree node toward the root and ``weight(x)``
    the number of hops of that tree edge (1 for real edges, more for routed
    artificial edges).  Each stage moves every pending counter ``rate`` hops;
    counters that meet at a node merge into one message.
    """

    def __init__(self, root: int, parent: Callable[[int], int | None],
                 weight: Callable[[int], int] | None = None, rate: int = 1):
        if rate < 1:
            raise ValueError("rate must be at least 1")
        self.root = root
        self.parent = parent
        self.weight = weight or (lambda x: 1)
        self.rate = rate
        # node -> [count, hops already travelled on its parent edge, injection stages]
        self.pending: dict[int, list] = {}
        self.arrived = 0
        self.latencies: list[int] = []
        self.stage = 0

    def inject(self, node: int, count: int = 1) -> None:
        if node == self.root:
            self.arrived += count
            self.latencies.extend([1] * count)
            return
        slot = self.pending.setdefault(node, [0, 0, []])
        slot[0] += count
        slot[2].extend([self.stage] * count)

    def step(self, net: Network | None = None, charge: bool = True) -> int:
        """Run one recovery stage; returns rounds used (at most ``rate``).

        With ``charge=False`` messages are still counted but the rounds are
        left to the caller, which may overlap several convergecasts.
        """
        self.stage += 1
        rounds = 0
        while self.pending and rounds < self.rate:
            rounds += 1
            moved: dict[int, list] = {}
            for node, (count, hops, stamps) in sorted(self.pending.items()):
                p = self.parent(node)
                if p is None:
                    raise ProtocolError(f"counter stranded at {node}: no tree route")
                if net is not None:
                    Message((count,)).check(net.g.n)
                    net.sent += 1
                    if net.ledger.current is not None:
                        net.ledger.count_messages(1)
                hops += 1
                if hops < self.weight(node):
                    slot = moved.setdefault(node, [0, hops, []])
                    slot[0] += count
                    slot[1] = hops
                    slot[2].extend(stamps)
                    continue
                if p == self.root:
                    self.arrived += count
                    self.latencies.extend(self.stage - st for st in stamps)
                    continue
                slot = moved.setdefault(p, [0, 0, []])
                slot[0] += count
                slot[2].extend(stamps)
            self.pending = moved
        if net is not None and rounds and charge:
            net.charge("convergecast", rounds)
        return rounds

    def reset(self) -> None:
        self.pending.clear()
        self.arrived = 0

    def max_pending_age(self) -> int:
        return max((self.stage - st for c, h, sts in self.pending.values() for st in sts), default=0)


def convergecast_rate(depth_cap: float, kappa: int) -> int:
    return max(1, math.ceil(depth_cap / kappa))


def overlapped_rounds(per_cast: Iterable[int]) -> int:
    """Rounds for convergecasts sharing the network: the slowest, times the packing factor.

    One message carries up to ``MAX_WORDS`` counters, one per convergecast.
    """
    busy = [r for r in per_cast if r > 0]
    if not busy:
        return 0
    return max(busy) * math.ceil(len(busy) / MAX_WORDS)


def sim_convergecast_count(net: Network, cc: Convergecast | None) -> int:
    if cc is None:
        raise ProtocolError("convergecast needs a tree")
    return cc.step(net)


# -- delta-bounded flood ----------------------------------------------------

def sim_broadcast_to_depth(net: Network, sources: Iterable[int], depth: int) -> tuple[set[int], int]:
    """Flood an event from ``sources`` for ``depth`` hops; charges ``depth`` rounds."""
    src = sorted(set(sources))
    informed = set(src)
    frontier = src
    for _ in range(depth):
        nxt = []
        for x in frontier:
            for y in sorted(net.g.adj[x]):
                net.send(x, y, (src[0], src[-1]))
                if y not in informed:
                    informed.add(y)
                    nxt.append(y)
        frontier = nxt
    net.charge("broadcast_delta", depth)
    return informed, depth


# -- parallel local searches ------------------------------------------------

@dataclass
class SearchResult:
    orphan: int
    found: int | None
    distance: int
    route: list[int]
    finished_round: int


def _pick(level: list[int], labels: list[float], bound: float) -> int | None:
    cands = [x for x in level if labels[x] < bound]
    return min(cands, key=lambda x: (labels[x], x)) if cands else None


def local_search(g: DynamicGraph, u: int, depth: int, labels: list[float]) -> tuple[int | None, int, list[int], int]:
    """Sequential reference search: nearest node with a smaller label within ``depth`` hops.

    Returns ``(v, distance, route u..v, edges scanned)``; ties go to the smaller
    label, then the smaller id.
    """
    dist = {u: 0}
    frontier = [u]
    scanned = 0
    for d in range(1, depth + 1):
        nxt = set()
        for x in frontier:
            scanned += len(g.adj[x])
            for y in g.adj[x]:
                if y not in dist:
                    nxt.add(y)
        if not nxt:
            break
        for y in nxt:
            dist[y] = d
        v = _pick(sorted(nxt), labels, labels[u])
        if v is not None:
            return v, d, _route(g, dist, u, v), scanned
        frontier = sorted(nxt)
    return None, 0, [], scanned


def _route(g: DynamicGraph, dist: dict[int, int], u: int, v: int) -> list[int]:
    # walk back through smallest-id predecessors one level closer to u
    route = [v]
    while route[-1] != u:
        x = route[-1]
        route.append(min(w for w in g.adj[x] if dist.get(w) == dist[x] - 1))
    route.reverse()
    return route


def sim_local_search(net: Network, orphans: Iterable[int], depth: int,
                     labels: list[float]) -> tuple[dict[int, SearchResult], int]:
    """Run all orphans' depth-bounded searches in parallel.

    A search advances one BFS level once every message of its current level
    has crossed its edge.  Each directed edge carries one message per round;
    when searches contend the lowest orphan id goes first.
    """
    g = net.g
    order = sorted(orphans)
    state = {}
    for u in order:
        state[u] = {"dist": {u: 0}, "frontier": [u], "level": 0, "pending": None, "done": depth == 0}
    results: dict[int, SearchResult] = {}
    for u in order:
        if state[u]["done"]:
            results[u] = SearchResult(u, None, 0, [], 0)
    rnd = 0
    while any(not st["done"] for st in state.values()):
        rnd += 1
        used: set[tuple[int, int]] = set()
        for u in order:
            st = state[u]
            if st["done"]:
                continue
            if st["pending"] is None:
                st["pending"] = [(x, y) for x in st["frontier"] for y in sorted(g.adj[x])]
            left = []
            for e in st["pending"]:
                if e in used:
                    left.append(e)
                else:
                    used.add(e)
                    net.send(e[0], e[1], (u, st["level"] + 1))
            st["pending"] = left
            if left:
                continue
            # level complete
            st["level"] += 1
            d = st["level"]
            dist = st["dist"]
            nxt = sorted({y for x in st["frontier"] for y in g.adj[x] if y not in dist})
            for y in nxt:
                dist[y] = d
            st["frontier"] = nxt
            st["pending"] = None
            v = _pick(nxt, labels, labels[u])
            if v is not None or d >= depth or not nxt:
                st["done"] = True
                route = _route(g, dist, u, v) if v is not None else []
                results[u] = SearchResult(u, v, d if v is not None else 0, route, rnd)
    net.charge("local_search", rnd)
    return results, rnd


# -- distance-increase reporting --------------------------------------------

@dataclass
class ReportOutcome:
    new_phase: bool
    rounds: int
    deactivated: set[int]


def sim_report_increase(net: Network, witness: int, root: int, depth_cap: int) -> ReportOutcome:
    """Flood a distance-increase notice up to ``2 * depth_cap`` hops from ``witness``.

    Reaching the root starts a new phase.  Otherwise every node within
    ``depth_cap`` of the witness drops out; if the flood exhausted a small
    split-off component, the charge is the component size.
    """
    reach = 2 * depth_cap
    dist = bfs_distances(net.g, witness, reach)
    reached = [v for v, d in enumerate(dist) if d != INF]
    flood_rounds = int(max(dist[v] for v in reached))
    if net.ledger.current is not None:
        net.ledger.count_messages(sum(net.g.degree(v) for v in reached if dist[v] < reach))
    if dist[root] != INF:
        net.charge("increase_report", flood_rounds)
        return ReportOutcome(True, flood_rounds, set())
    deactivated = {v for v in reached if dist[v] <= depth_cap}
    exhausted = all(dist[y] != INF for v in reached for y in net.g.adj[v])
    charge = len(reached) if exhausted else reach
    net.charge("increase_report", charge)
    return ReportOutcome(False, charge, deactivated)
