"""Execute a workload with one algorithm, audit it against BFS, and report."""
from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from .congest import Network, RoundLedger, sim_build_bfs
from .estree import DECREMENTAL as ES_DEC, INCREMENTAL as ES_INC, EsTree
from .graph import INF, bfs_distances
from .layers import DistributedDecremental, DistributedIncremental, SequentialSSSP
from .workload import DECREMENTAL, INCREMENTAL, Workload

ALGOS = ("naive", "es", "inc_seq", "inc_dist", "dec_dist")
MODES = ("sequential", "distributed")
AUDITS = ("full", "final", "off")
_DIRECTION = {"inc_seq": INCREMENTAL, "inc_dist": INCREMENTAL, "dec_dist": DECREMENTAL}
_MODE = {"inc_seq": "sequential", "inc_dist": "distributed", "dec_dist": "distributed"}


class RunError(ValueError):
    """Algorithm, mode and workload do not fit together."""


@dataclass
class StageReport:
    stage: int
    change: tuple[str, int, int]
    reported_digest: str
    oracle_digest: str
    max_ratio: float
    rounds: int
    events: str = ""


@dataclass
class RunReport:
    algo: str
    mode: str
    epsilon: float
    workload: Workload
    stages: list[StageReport] = field(default_factory=list)
    ledger: RoundLedger = field(default_factory=RoundLedger)
    violations: list[str] = field(default_factory=list)
    phases_by_cause: dict[str, int] = field(default_factory=dict)
    max_ratio: float = 1.0

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def total_rounds(self) -> int:
        return self.ledger.recovery_rounds

    @property
    def amortized(self) -> float:
        return self.total_rounds / self.workload.q if self.workload.q else 0.0

    def summary(self) -> dict:
        w = self.workload
        return {
            "family": w.family, "n": w.n, "q": w.q, "seed": w.seed, "direction": w.direction,
            "algo": self.algo, "mode": self.mode, "epsilon": self.epsilon,
            "preprocessing_rounds": self.ledger.total_rounds - self.ledger.recovery_rounds,
            "total_rounds": self.total_rounds,
            "amortized_rounds": round(self.amortized, 4),
            "messages": self.ledger.total_messages,
            "phases": dict(sorted(self.phases_by_cause.items())),
            "max_ratio": round(self.max_ratio, 6),
            "violations": len(self.violations),
            "status": "PASS" if self.passed else "FAIL",
        }


def _digest(values) -> str:
    text = ",".join("inf" if x == INF else str(int(x)) for x in values)
    return hashlib.sha1(text.encode()).hexdigest()[:12]


class _Naive:
    """Recompute BFS after every change; rounds are the flood depth."""

    def __init__(self, g, s, net):
        self.g, self.root, self.net = g, s, net
        self.work = 0
        net.ledger.begin_stage("P")
        self._rebuild()
        net.ledger.end_stage()

    def _rebuild(self):
        snap, _ = sim_build_bfs(self.net, self.root, INF)
        self.work += self.g.n + 2 * self.g.m
        self.dist = snap.dist

    def apply(self, op, u, v):
        self.net.ledger.begin_stage(op)
        (self.g.insert_edge if op == "I" else self.g.delete_edge)(u, v)
        self._rebuild()
        self.net.ledger.end_stage()

    def distance(self, x):
        return self.dist[x]


class _Es:
    def __init__(self, g, s, net, direction):
        self.g, self.net = g, net
        net.ledger.begin_stage("P")
        sim_build_bfs(net, s, INF)
        self.tree = EsTree(g, s, g.n, ES_INC if direction == INCREMENTAL else ES_DEC)
        net.ledger.end_stage()

    @property
    def work(self):
        return self.tree.work

    def apply(self, op, u, v):
        self.net.ledger.begin_stage(op)
        before = self.tree.rounds
        if op == "I":
            self.g.insert_edge(u, v)
            self.tree.insert(u, v)
        else:
            self.g.delete_edge(u, v)
            self.tree.delete(u, v)
        self.net.charge("es_update", 1 + self.tree.rounds - before)
        self.net.ledger.end_stage()

    def distance(self, x):
        return self.tree.level[x]


class _Seq:
    """Sequential wrapper; the ledger column ``rounds`` carries work units."""

    def __init__(self, g, s, eps, ledger, audit):
        self.h = SequentialSSSP(g, s, eps, audit=audit)
        self.ledger = ledger
        self._last = self.h.work
        ledger.begin_stage("P")
        ledger.add_rounds(self.h.work)
        ledger.end_stage()

    @property
    def work(self):
        return self.h.work

    def apply(self, op, u, v):
        self.ledger.begin_stage(op)
        self.h.insert(u, v)
        self.ledger.add_rounds(self.h.work - self._last)
        self._last = self.h.work
        self.ledger.end_stage(self.h.total_phases(), -1)

    def distance(self, x):
        return self.h.distance(x)


class _Dist:
    def __init__(self, h):
        self.h = h

    def apply(self, op, u, v):
        (self.h.insert if op == "I" else self.h.delete)(u, v)

    def distance(self, x):
        return self.h.distance(x)


def run(workload: Workload, algo: str, epsilon: float = 1.0, mode: str | None = None,
        audit: str = "full") -> RunReport:
    """Run ``algo`` over ``workload``; every audited stage compares all nodes with BFS."""
    if algo not in ALGOS:
        raise RunError(f"unknown algorithm {algo!r}")
    if audit not in AUDITS:
        raise RunError(f"unknown audit level {audit!r}")
    mode = mode or _MODE.get(algo, "distributed")
    if mode not in MODES:
        raise RunError(f"unknown mode {mode!r}")
    if algo in _DIRECTION and _DIRECTION[algo] != workload.direction:
        raise RunError(f"{algo} needs a {_DIRECTION[algo]} workload, got {workload.direction}")
    if algo in _MODE and _MODE[algo] != mode:
        raise RunError(f"{algo} only runs in {_MODE[algo]} mode")
    if not 0 < epsilon <= 1:
        raise RunError(f"epsilon must lie in (0, 1], got {epsilon}")

    report = RunReport(algo, mode, epsilon, workload)
    if not workload.changes:
        return report
    g = workload.graph()
    s = workload.root
    ledger = report.ledger
    net = Network(g, ledger)
    exact = algo in ("naive", "es")
    if algo == "naive":
        impl = _Naive(g, s, net)
    elif algo == "es":
        impl = _Es(g, s, net, workload.direction)
    elif algo == "inc_seq":
        impl = _Seq(g, s, epsilon, ledger, audit == "full")
    elif algo == "inc_dist":
        impl = _Dist(DistributedIncremental(g, s, epsilon, net, audit=audit == "full"))
    else:
        impl = _Dist(DistributedDecremental(g, s, epsilon, net))
    sequential_work = mode == "sequential" and algo in ("naive", "es")
    last_work = impl.work if sequential_work else 0
    if sequential_work:
        ledger.rows[0].rounds = last_work
        ledger.rows[0].causes = {}

    bound = 1.0 if exact else 1.0 + epsilon
    last = len(workload.changes) - 1
    for i, (op, u, v) in enumerate(workload.changes):
        impl.apply(op, u, v)
        row = ledger.rows[-1]
        if sequential_work:
            row.rounds, last_work = impl.work - last_work, impl.work
            row.causes = {}
        if audit == "full" or (audit == "final" and i == last):
            stage = _audit(report, impl, g, s, bound, row.stage_index, (op, u, v))
            stage.rounds = row.rounds
            report.stages.append(stage)
        if isinstance(impl, _Dist):
            _structural(report, impl.h, row.stage_index)
    if isinstance(impl, (_Dist, _Seq)):
        report.phases_by_cause = impl.h.causes()
    return report


def _audit(report: RunReport, impl, g, s, bound: float, stage: int, change) -> StageReport:
    oracle = bfs_distances(g, s)
    reported = [impl.distance(x) for x in range(g.n)]
    worst = 1.0
    for x, (d, r) in enumerate(zip(oracle, reported)):
        if d == INF:
            if r != INF:
                report.violations.append(f"stage {stage}: node {x} disconnected but reported {r}")
            continue
        if r < d or r > bound * d:
            report.violations.append(f"stage {stage}: node {x} reported {r}, oracle {d}")
        if d > 0 and r != INF:
            worst = max(worst, r / d)
    report.max_ratio = max(report.max_ratio, worst)
    return StageReport(stage, change, _digest(reported), _digest(oracle), worst, 0)


def _structural(report: RunReport, h, stage: int) -> None:
    for layer in h.lazy_layers():
        ph = layer.phase
        if hasattr(ph, "artificial"):
            try:
                ph.check_invariants()
            except AssertionError as exc:
                report.violations.append(f"stage {stage}: layer {layer.index}: {exc}")


def emit_csv(report: RunReport, path: str | Path) -> None:
    report.ledger.write_csv(path)


def emit_summary(report: RunReport, out: TextIO | None = None) -> None:
    out = out or sys.stdout
    for key, value in report.summary().items():
        if isinstance(value, dict):
            value = " ".join(f"{k}={v}" for k, v in value.items()) or "-"
        print(f"{key}: {value}", file=out)
    for v in report.violations[:10]:
        print(f"violation: {v}", file=out)
