"""(1+eps)-approximate wrappers built from distance layers ``X_i = 2**i``.

Each layer either recomputes a depth-``X_i`` BFS after every change, runs an
Even-Shiloach tree to depth ``X_i``, or runs a lazy phase machine with
parameters balanced for ``X_i``.  Queries take the smallest layer that knows
a finite distance.  The number of changes ``q`` is guessed by doubling; when
the guess is exceeded everything is rebuilt from the current graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .congest import (Convergecast, Network, convergecast_rate, overlapped_rounds, sim_broadcast_to_depth,
                      sim_build_bfs, sim_local_search, sim_report_increase)
from .decremental import DISTANCE_INCREASE, DecrementalPhase
from .estree import DECREMENTAL, INCREMENTAL, EsTree
from .graph import INF, BfsSnapshot, DynamicGraph, bfs, bfs_distances
from .incremental import COUNTER_FULL, DISTANCE_DECREASE, IncrementalPhase, NotCoveredError, RootComponent

REBUILD = "rebuild"
EVEN_SHILOACH = "even_shiloach"
LAZY = "lazy"


def _check_eps(epsilon: float) -> None:
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")


def _floor_root(value: Fraction, k: int) -> int:
    """Largest integer r >= 0 with r**k <= value."""
    if value <= 0:
        return 0
    r = int(float(value) ** (1.0 / k))
    while (r + 1) ** k <= value:
        r += 1
    while r > 0 and r ** k > value:
        r -= 1
    return r


def inc_lazy_params(q: int, depth_cap: int, n: int, epsilon: float) -> tuple[int, int]:
    """kappa, delta balancing counter and distance-decrease phases, floored and clamped to 1."""
    gamma = Fraction(epsilon) / 4
    kappa = _floor_root(Fraction(q * depth_cap) * gamma ** 2 / n, 3)
    delta = _floor_root(Fraction(n * depth_cap ** 2) * gamma / q, 3)
    return max(1, kappa), max(1, delta)


def dec_lazy_params(q: int, depth_cap: int, n: int) -> tuple[int, int]:
    kappa = _floor_root(Fraction(q * depth_cap, n), 5)
    delta = _floor_root(Fraction(n ** 2 * depth_cap ** 3, q ** 2), 5)
    return max(1, kappa), max(1, delta)


def inc_lazy_guard(q: int, depth_cap: int, n: int, epsilon: float) -> bool:
    gamma = Fraction(epsilon) / 4
    return gamma ** 2 * q * depth_cap >= n and gamma * n * depth_cap ** 2 >= q


def dec_lazy_guard(q: int, depth_cap: int, n: int, epsilon: float) -> bool:
    return Fraction(epsilon) ** 5 * q * depth_cap / 32 >= n and n ** 2 * depth_cap ** 3 >= q ** 2


def inc_strategy(q: int, depth_cap: int, n: int, epsilon: float) -> str:
    eps = Fraction(epsilon)
    if q * eps ** 2 * depth_cap <= 16 * n:
        return REBUILD
    # X <= 4 sqrt(q) / sqrt(eps n)  <=>  X^2 eps n <= 16 q
    if depth_cap ** 2 * eps * n <= 16 * q:
        return EVEN_SHILOACH
    return LAZY


def dec_strategy(q: int, depth_cap: int, n: int, epsilon: float) -> str:
    eps = Fraction(epsilon)
    if q * eps ** 5 * depth_cap <= 32 * n:
        return REBUILD
    # X <= (q/n)^(2/3)  <=>  X^3 n^2 <= q^2
    if depth_cap ** 3 * n ** 2 <= q ** 2:
        return EVEN_SHILOACH
    return LAZY


def es_floor_depth(q: int, n: int, epsilon: float) -> int:
    """Smallest power of two >= 2 n^(1/4) q^(1/2) / eps^(1/2)."""
    target = 2 * n ** 0.25 * q ** 0.5 / epsilon ** 0.5
    x = 1
    while x < target:
        x *= 2
    return x


def truncate(snap: BfsSnapshot, depth_cap: float) -> BfsSnapshot:
    """Restrict a deeper BFS to ``depth_cap``; parents are unchanged by construction."""
    dist = [d if d <= depth_cap else INF for d in snap.dist]
    parent = [p if dist[v] != INF else None for v, p in enumerate(snap.parent)]
    order = [v for v in snap.order if dist[v] != INF]
    return BfsSnapshot(snap.root, depth_cap, dist, parent, order)


# -- layers -----------------------------------------------------------------

@dataclass
class LayerConfig:
    index: int
    depth_cap: int
    strategy: str
    kappa: int = 0
    delta: int = 0


class Layer:
    def __init__(self, cfg: LayerConfig, g: DynamicGraph, s: int):
        self.cfg = cfg
        self.g = g
        self.root = s
        self.changes = 0

    @property
    def index(self) -> int:
        return self.cfg.index

    @property
    def depth_cap(self) -> int:
        return self.cfg.depth_cap

    def distance(self, v: int) -> float:
        raise NotImplementedError

    def path(self, v: int) -> list[int]:
        raise NotImplementedError

    def self_phases(self) -> int:
        return 0


class RebuildLayer(Layer):
    def __init__(self, cfg, g, s, snapshot: BfsSnapshot | None = None):
        super().__init__(cfg, g, s)
        self.refresh(snapshot)

    def refresh(self, snapshot: BfsSnapshot | None = None) -> None:
        self.snapshot = snapshot if snapshot is not None else bfs(self.g, self.root, self.depth_cap)

    def distance(self, v):
        return self.snapshot.dist[v]

    def path(self, v):
        return self.snapshot.path(v)


class EsLayer(Layer):
    def __init__(self, cfg, g, s, mode):
        super().__init__(cfg, g, s)
        self.tree = EsTree(g, s, cfg.depth_cap, mode)

    def distance(self, v):
        return self.tree.level[v]

    def path(self, v):
        return self.tree.path(v)


class LazyIncLayer(Layer):
    def __init__(self, cfg, g, s, component: RootComponent, audit: bool = False):
        super().__init__(cfg, g, s)
        self.phase = IncrementalPhase(g, s, cfg.kappa, cfg.delta, cfg.depth_cap,
                                      component=component, audit=audit)
        self.cascades = 0
        self.cc: Convergecast | None = None

    def distance(self, v):
        return self.phase.label[v]

    def path(self, v):
        return self.phase.path(v)

    def self_phases(self) -> int:
        return len(self.phase.rebuild_log)


class LazyDecLayer(Layer):
    def __init__(self, cfg, g, s):
        super().__init__(cfg, g, s)
        self.phase = DecrementalPhase(g, s, cfg.kappa, cfg.delta, cfg.depth_cap)
        self.cc: Convergecast | None = None

    def distance(self, v):
        return self.phase.w_dist[v]

    def path(self, v):
        return self.phase.path(v)

    def self_phases(self) -> int:
        return len(self.phase.rebuild_log)


@dataclass
class EpochRecord:
    """Per-layer statistics of one q-guess epoch, kept for auditing phase bounds."""

    q_guess: int
    changes: int
    index: int
    depth_cap: int
    strategy: str
    kappa: int
    delta: int
    self_phases: int


class _Layered:
    """Shared plumbing: q-doubling, query routing, epoch bookkeeping."""

    direction = INCREMENTAL

    def __init__(self, g: DynamicGraph, s: int, epsilon: float, net: Network | None = None,
                 audit: bool = False, q_start: int = 1):
        _check_eps(epsilon)
        if q_start < 1:
            raise ValueError(f"q_start must be >= 1, got {q_start}")
        if not 0 <= s < g.n:
            raise ValueError(f"root {s} out of range")
        self.g = g
        self.root = s
        self.epsilon = epsilon
        self.net = net
        self.audit = audit
        self.q_guess = q_start
        self.changes = 0
        self.epoch_changes = 0
        self.epochs: list[EpochRecord] = []
        self.layers: list[Layer] = []
        self.restarts = 0
        self._past_causes: dict[str, int] = {}

    # subclasses build self.layers for the current q_guess
    def _configure(self) -> None:
        raise NotImplementedError

    def _archive(self) -> None:
        for cause, k in self._layer_causes().items():
            self._past_causes[cause] = self._past_causes.get(cause, 0) + k
        for layer in self.layers:
            c = layer.cfg
            self.epochs.append(EpochRecord(self.q_guess, self.epoch_changes, c.index, c.depth_cap,
                                           c.strategy, c.kappa, c.delta, layer.self_phases()))

    def _next_change(self) -> bool:
        """Count a change; once the total exceeds the guess, double it and rebuild.

        The rebuild sees the graph after this change, so the new epoch starts empty.
        Returns True if a restart happened.
        """
        self.changes += 1
        self.epoch_changes += 1
        if self.changes > self.q_guess:
            self.epoch_changes -= 1
            self._archive()
            while self.q_guess < self.changes:
                self.q_guess *= 2
            self.epoch_changes = 0
            self.restarts += 1
            self._configure()
            return True
        return False

    def epoch_records(self) -> list[EpochRecord]:
        out = list(self.epochs)
        for layer in self.layers:
            c = layer.cfg
            out.append(EpochRecord(self.q_guess, self.epoch_changes, c.index, c.depth_cap,
                                   c.strategy, c.kappa, c.delta, layer.self_phases()))
        return out

    def source(self, v: int) -> Layer | None:
        for layer in self.layers:
            if layer.distance(v) != INF:
                return layer
        return None

    def distance(self, v: int) -> float:
        layer = self.source(v)
        return layer.distance(v) if layer is not None else INF

    def path(self, v: int) -> list[int]:
        layer = self.source(v)
        if layer is None:
            raise NotCoveredError(f"node {v} is not connected to the root")
        return layer.path(v)

    def distances(self) -> list[float]:
        return [self.distance(v) for v in range(self.g.n)]

    def _layer_causes(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for layer in self.layers:
            ph = getattr(layer, "phase", None)
            if ph is not None:
                for cause, k in ph.causes().items():
                    out[cause] = out.get(cause, 0) + k
        return out

    def causes(self) -> dict[str, int]:
        """Self-triggered phase starts by cause over the whole run, plus q-doubling restarts."""
        out = dict(self._past_causes)
        for cause, k in self._layer_causes().items():
            out[cause] = out.get(cause, 0) + k
        out["restart"] = self.restarts
        return out

    def total_phases(self) -> int:
        return sum(r.self_phases for r in self.epoch_records())

    def lazy_layers(self) -> list[Layer]:
        return [l for l in self.layers if l.cfg.strategy == LAZY]


# -- sequential incremental SSSP ---------------------------------------------

class SequentialSSSP(_Layered):
    """Incremental (1+eps)-approximate SSSP in the RAM model.

    Small guesses of ``q`` recompute BFS after each insertion; otherwise an
    Even-Shiloach floor gives exact distances up to ``X*`` and lazy layers
    cover ``X*`` up to ``2**ceil(log2 n)``.
    """

    def __init__(self, g: DynamicGraph, s: int, epsilon: float, audit: bool = False,
                 floor_depth: int | None = None, q_start: int = 1):
        super().__init__(g, s, epsilon, audit=audit, q_start=q_start)
        self._floor_override = floor_depth
        self.work = 0
        self._configure()

    @property
    def rebuild_mode(self) -> bool:
        return self.mode == REBUILD

    def _configure(self) -> None:
        n = self.g.n
        self.component = RootComponent(self.g, self.root)
        self.work += self.g.n + 2 * self.g.m
        self.es = None
        self.layers = []
        if self._floor_override is None and self.q_guess <= 8 * math.sqrt(n) / self.epsilon:
            self.mode = REBUILD
            self.floor_depth = None
            self.layers = [RebuildLayer(LayerConfig(0, n, REBUILD), self.g, self.root)]
            self.work += self.g.n + 2 * self.g.m
            return
        self.mode = LAZY
        x_star = self._floor_override or es_floor_depth(self.q_guess, n, self.epsilon)
        self.floor_depth = x_star
        es = EsLayer(LayerConfig(-1, x_star, EVEN_SHILOACH), self.g, self.root, INCREMENTAL)
        self.es = es.tree
        self.layers = [es]
        top = max(1, math.ceil(math.log2(n))) if n > 1 else 0
        for i in range(int(math.log2(x_star)), top + 1):
            x = 2 ** i
            kappa, delta = inc_lazy_params(self.q_guess, x, n, self.epsilon)
            if self._floor_override is None:
                assert inc_lazy_guard(self.q_guess, x, n, self.epsilon), (self.q_guess, x, n)
            cfg = LayerConfig(i, x, LAZY, kappa, delta)
            self.layers.append(LazyIncLayer(cfg, self.g, self.root, self.component, self.audit))
            self.work += self.g.n + 2 * self.g.m

    def insert(self, u: int, v: int) -> int | None:
        """Insert ``(u, v)``; returns the highest lazy layer that started a phase, if any."""
        self.g.insert_edge(u, v)
        if self._next_change():
            return None
        self.work += 1
        if self.mode == REBUILD:
            self.layers[0].refresh()
            self.work += self.g.n + 2 * self.g.m
            return None
        before = self.component.work
        joined = self.component.join(u, v)
        self.work += self.component.work - before
        es_before = self.es.work
        self.es.insert(u, v)
        self.work += self.es.work - es_before
        return _cascade_insert(self, u, v, joined)


def _cascade_insert(h: _Layered, u: int, v: int, joined) -> int | None:
    """Feed lazy layers top-down; a phase start in layer i re-initializes all lazy j < i."""
    lazy = h.lazy_layers()
    top_restart = None
    for layer in reversed(lazy):
        if top_restart is not None:
            layer.phase.initialize()
            layer.cascades += 1
            if hasattr(h, "work"):
                h.work += h.g.n + 2 * h.g.m
            continue
        out = layer.phase.insert(u, v, joined)
        if out.rebuilt:
            top_restart = layer.index
            if hasattr(h, "work"):
                h.work += h.g.n + 2 * h.g.m
    return top_restart


# -- distributed incremental ------------------------------------------------

class DistributedIncremental(_Layered):
    """Incremental (1+eps)-approximate BFS tree with metered synchronous rounds."""

    def __init__(self, g: DynamicGraph, s: int, epsilon: float, net: Network | None = None,
                 audit: bool = False, q_start: int = 1):
        super().__init__(g, s, epsilon, net or Network(g), audit, q_start)
        self.net.ledger.begin_stage("P")
        self._configure()
        self.net.ledger.end_stage(self.total_phases(), -1)

    def _configure(self) -> None:
        n = self.g.n
        self.component = RootComponent(self.g, self.root)
        full, rounds = sim_build_bfs(self.net, self.root, INF)
        top = max(0, math.ceil(math.log2(full.depth))) if full.depth > 0 else 0
        self.layers = []
        for i in range(top + 1):
            self.layers.append(self._make_layer(i))

    def _make_layer(self, i: int) -> Layer:
        n = self.g.n
        x = 2 ** i
        strat = inc_strategy(self.q_guess, x, n, self.epsilon)
        if strat == REBUILD:
            return RebuildLayer(LayerConfig(i, x, REBUILD), self.g, self.root)
        if strat == EVEN_SHILOACH:
            return EsLayer(LayerConfig(i, x, EVEN_SHILOACH), self.g, self.root, INCREMENTAL)
        assert inc_lazy_guard(self.q_guess, x, n, self.epsilon), (self.q_guess, x, n)
        kappa, delta = inc_lazy_params(self.q_guess, x, n, self.epsilon)
        layer = LazyIncLayer(LayerConfig(i, x, LAZY, kappa, delta), self.g, self.root,
                             self.component, self.audit)
        self._fresh_convergecast(layer)
        return layer

    def _fresh_convergecast(self, layer: LazyIncLayer) -> None:
        ph = layer.phase
        layer.cc = Convergecast(self.root, lambda x, ph=ph: ph.parent[x],
                                rate=convergecast_rate(layer.depth_cap, layer.cfg.kappa))

    def insert(self, u: int, v: int) -> None:
        ledger = self.net.ledger
        ledger.begin_stage("I")
        self.g.insert_edge(u, v)
        if self._next_change():
            ledger.end_stage(self.total_phases(), len(self.layers) - 1)
            return
        net = self.net
        joined = self.component.join(u, v)
        if joined:
            # BFS among the newly connected nodes, entered through the new edge
            net.charge("graft", 1 + max(h for _, h, _ in joined), sum(self.g.degree(x) for x, _, _ in joined))
        flood = 0
        for layer in self.layers:
            if layer.cfg.strategy == REBUILD:
                flood = max(flood, layer.depth_cap)
            elif layer.cfg.strategy == EVEN_SHILOACH:
                before = layer.tree.rounds
                layer.tree.insert(u, v)
                net.charge("es_update", 1 + layer.tree.rounds - before)
        lazy = self.lazy_layers()
        if lazy:
            net.charge("exchange", math.ceil(len(lazy) / 2))
        top_restart = None
        cc_rounds = []
        for layer in reversed(lazy):
            ph = layer.phase
            if top_restart is not None:
                ph.initialize()
                layer.cascades += 1
                self._fresh_convergecast(layer)
                continue
            lu, lv = ph.label[u], ph.label[v]
            out = ph.insert(u, v, joined)
            if out.rebuilt:
                top_restart = layer.index
                flood = max(flood, layer.depth_cap)
                if out.cause == DISTANCE_DECREASE:
                    # the report climbs the phase-start tree from the lower endpoint
                    net.charge("increase_report", int(min(lu, lv)))
                self._fresh_convergecast(layer)
            else:
                src = u if lu <= lv else v
                if ph.label[src] != INF:
                    layer.cc.inject(src)
                cc_rounds.append(layer.cc.step(net, charge=False))
        if cc_rounds:
            net.charge("convergecast", overlapped_rounds(cc_rounds))
        if flood:
            sim_build_bfs(net, self.root, flood)
        for layer in self.layers:
            if layer.cfg.strategy == REBUILD:
                layer.refresh()
        if joined and self._uncovered(joined):
            self._grow()
        ledger.end_stage(self.total_phases(), -1 if top_restart is None else top_restart)

    def _uncovered(self, joined) -> bool:
        top = self.layers[-1]
        return any(top.distance(x) == INF for x, _, _ in joined)

    def _grow(self) -> None:
        full, _ = sim_build_bfs(self.net, self.root, INF)
        while 2 ** (len(self.layers) - 1) < full.depth:
            self.layers.append(self._make_layer(len(self.layers)))


# -- distributed decremental ------------------------------------------------

class DistributedDecremental(_Layered):
    """Decremental (1+eps)-approximate BFS tree with metered synchronous rounds.

    Layers are independent: nodes pushed past ``X_i`` are picked up by a
    larger layer, and the top layer grows when it loses a connected node.
    """

    direction = DECREMENTAL

    def __init__(self, g: DynamicGraph, s: int, epsilon: float, net: Network | None = None,
                 q_start: int = 1):
        super().__init__(g, s, epsilon, net or Network(g), q_start=q_start)
        self.witnesses: list[tuple[int, int, int]] = []  # (layer, witness, phase-start label)
        self.search_rounds: list[tuple[int, int, int]] = []  # (orphans, delta, rounds)
        self.net.ledger.begin_stage("P")
        self._configure()
        self.net.ledger.end_stage(self.total_phases(), -1)

    def _configure(self) -> None:
        full, _ = sim_build_bfs(self.net, self.root, INF)
        top = max(0, math.ceil(math.log2(full.depth))) if full.depth > 0 else 0
        self.layers = [self._make_layer(i) for i in range(top + 1)]

    def _make_layer(self, i: int) -> Layer:
        n = self.g.n
        x = 2 ** i
        strat = dec_strategy(self.q_guess, x, n, self.epsilon)
        if strat == REBUILD:
            return RebuildLayer(LayerConfig(i, x, REBUILD), self.g, self.root)
        if strat == EVEN_SHILOACH:
            return EsLayer(LayerConfig(i, x, EVEN_SHILOACH), self.g, self.root, DECREMENTAL)
        assert dec_lazy_guard(self.q_guess, x, n, self.epsilon), (self.q_guess, x, n)
        kappa, delta = dec_lazy_params(self.q_guess, x, n)
        layer = LazyDecLayer(LayerConfig(i, x, LAZY, kappa, delta), self.g, self.root)
        self._fresh_convergecast(layer)
        return layer

    def _fresh_convergecast(self, layer: LazyDecLayer) -> None:
        ph = layer.phase
        # artificial edges can stretch a root path to X + kappa * delta hops
        reach = layer.depth_cap + layer.cfg.kappa * layer.cfg.delta
        layer.cc = Convergecast(self.root, lambda x, ph=ph: ph.tree_parent[x], ph.edge_weight,
                                rate=convergecast_rate(reach, layer.cfg.kappa))

    def delete(self, u: int, v: int) -> None:
        ledger = self.net.ledger
        ledger.begin_stage("D")
        self.g.delete_edge(u, v)
        if self._next_change():
            ledger.end_stage(self.total_phases(), len(self.layers) - 1)
            return
        net = self.net
        top = self.layers[-1]
        covered_before = {x for x in range(self.g.n) if top.distance(x) != INF}
        flood = 0
        for layer in self.layers:
            if layer.cfg.strategy == REBUILD:
                flood = max(flood, layer.depth_cap)
            elif layer.cfg.strategy == EVEN_SHILOACH:
                before = layer.tree.rounds
                layer.tree.delete(u, v)
                net.charge("es_update", 1 + layer.tree.rounds - before)
        lazy = self.lazy_layers()
        if lazy:
            # one delta-flood announces the deletion to every lazy layer
            sim_broadcast_to_depth(net, (u, v), max(l.cfg.delta for l in lazy))
        restarted = -1
        cc_rounds = []
        for layer in lazy:
            ph = layer.phase
            labels = ph.label  # initialize() swaps in a new list, so this keeps the old phase
            out = ph.delete(u, v)
            if out.orphans:
                _, rounds = sim_local_search(net, out.orphans, layer.cfg.delta, labels)
                self.search_rounds.append((len(out.orphans), layer.cfg.delta, rounds))
            if out.rebuilt:
                restarted = max(restarted, layer.index)
                if out.cause == DISTANCE_INCREASE:
                    self.witnesses.append((layer.index, out.witness, int(labels[out.witness])))
                    sim_report_increase(net, out.witness, self.root, layer.depth_cap)
                flood = max(flood, layer.depth_cap)
                self._fresh_convergecast(layer)
            else:
                lu, lv = ph.w_dist[u], ph.w_dist[v]
                src = u if lu <= lv else v
                if ph.w_dist[src] != INF:
                    layer.cc.inject(src)
                cc_rounds.append(layer.cc.step(net, charge=False))
        if cc_rounds:
            net.charge("convergecast", overlapped_rounds(cc_rounds))
        if flood:
            sim_build_bfs(net, self.root, flood)
        for layer in self.layers:
            if layer.cfg.strategy == REBUILD:
                layer.refresh()
        top = self.layers[-1]
        if any(top.distance(x) == INF for x in covered_before):
            self._grow()
        ledger.end_stage(self.total_phases(), restarted)

    def _grow(self) -> None:
        full, _ = sim_build_bfs(self.net, self.root, INF)
        while 2 ** (len(self.layers) - 1) < full.depth:
            self.layers.append(self._make_layer(len(self.layers)))
