from __future__ import annotations

import csv
import random

import pytest
from hypothesis import given, settings, strategies as st

from lazybfs.congest import (CSV_HEADER, Convergecast, Network, ProtocolError, RoundLedger, convergecast_rate,
                             local_search, overlapped_rounds, sim_broadcast_to_depth, sim_build_bfs,
                             sim_convergecast_count, sim_local_search, sim_report_increase)
from lazybfs.graph import INF, DynamicGraph


def path(n):
    return DynamicGraph(n, [(i, i + 1) for i in range(n - 1)])


def staged(g):
    net = Network(g)
    net.ledger.begin_stage("I")
    return net


def test_bfs_flood_rounds():
    net = staged(path(51))
    snap, rounds = sim_build_bfs(net, 0, 100)
    assert rounds == 50 and snap.dist[50] == 50
    snap, rounds = sim_build_bfs(net, 0, 3)
    assert rounds == 3 and len(snap.order) == 4
    star = DynamicGraph(6, [(0, i) for i in range(1, 6)])
    assert sim_build_bfs(staged(star), 0, 10)[1] == 1
    row = net.ledger.end_stage()
    assert row.causes == {"bfs_build": 53} and row.rounds == 53


def test_message_budget_and_static_topology():
    net = Network(path(4))
    net.send(0, 1, (1, 2, 3, 4))
    with pytest.raises(ProtocolError):
        net.send(0, 1, (1, 2, 3, 4, 5))
    with pytest.raises(ProtocolError):
        net.send(0, 1, (4 ** 3 + 1,))
    with pytest.raises(ProtocolError):
        net.send(0, 2, (1,))


def test_ledger_accounting(tmp_path):
    led = RoundLedger()
    led.write_csv(tmp_path / "empty.csv")
    assert (tmp_path / "empty.csv").read_text() == ",".join(CSV_HEADER) + "\n"
    led.begin_stage("P")
    led.charge("bfs_build", 7, 20)
    led.end_stage()
    led.begin_stage("I")
    led.charge("convergecast", 2)
    led.charge("bfs_build", 3)
    led.end_stage(phase_index=2, layer_index=1)
    assert led.total_rounds == 12 and led.recovery_rounds == 5
    assert led.cause_total("bfs_build") == 10
    led.write_csv(tmp_path / "l.csv")
    rows = list(csv.reader(open(tmp_path / "l.csv")))
    assert rows[2] == ["1", "I", "5", "0", "bfs_build=3;convergecast=2", "2", "1"]
    with pytest.raises(ValueError):
        led.begin_stage("D")
        led.charge("bfs_build", -1)
    with pytest.raises(ValueError):
        led.charge("gossip", 1)
    with pytest.raises(ProtocolError):
        led.begin_stage("D")


def test_convergecast_rate_arithmetic():
    g = path(17)
    net = staged(g)
    rate = convergecast_rate(16, 4)
    assert rate == 4
    cc = Convergecast(0, lambda x: x - 1 if x else None, rate=rate)
    cc.inject(16)
    stages = 0
    while cc.arrived == 0:
        sim_convergecast_count(net, cc)
        stages += 1
    assert stages == 4 and cc.latencies == [4]


def test_convergecast_merges_at_junction():
    # 0 - 1, with 2 and 3 both children of 1
    g = DynamicGraph(4, [(0, 1), (1, 2), (1, 3)])
    net = staged(g)
    parent = {1: 0, 2: 1, 3: 1}
    cc = Convergecast(0, parent.get, rate=1)
    cc.inject(2)
    cc.inject(3)
    cc.step(net)
    assert list(cc.pending) == [1] and cc.pending[1][0] == 2
    sent = net.sent
    cc.step(net)
    assert net.sent == sent + 1 and cc.arrived == 2


def test_convergecast_weighted_edge_and_errors():
    cc = Convergecast(0, lambda x: 0, weight=lambda x: 3, rate=1)
    cc.inject(5)
    assert [cc.step() for _ in range(3)] == [1, 1, 1] and cc.arrived == 1
    with pytest.raises(ProtocolError):
        sim_convergecast_count(Network(path(2)), None)
    stuck = Convergecast(0, lambda x: None)
    stuck.inject(1)
    with pytest.raises(ProtocolError):
        stuck.step()
    assert overlapped_rounds([0, 3, 5]) == 5
    assert overlapped_rounds([1] * 5 + [4]) == 8


def test_broadcast_ball():
    g = path(6)
    g.delete_edge(1, 2)
    informed, rounds = sim_broadcast_to_depth(staged(g), (1, 2), 2)
    assert informed == {0, 1, 2, 3, 4} and rounds == 2
    informed, rounds = sim_broadcast_to_depth(staged(g), (1, 2), 0)
    assert informed == {1, 2} and rounds == 0


def test_local_search_contention():
    labels = [0, 1, 2, 3, 4, 5, 6]
    g = path(7)
    res, rounds = sim_local_search(staged(g), [3], 2, labels)
    assert res[3].found == 2 and rounds <= 2
    # two disjoint searches in parallel
    g = DynamicGraph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    lab = [0, 1, 2, 0, 1, 2]
    res, rounds = sim_local_search(staged(g), [2, 5], 2, lab)
    assert res[2].found == 1 and res[5].found == 4 and rounds <= 2
    # fully overlapping: both orphans search the same star, contending on shared edges
    g = DynamicGraph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
    lab = [0, 5, 5, 5, 5]
    res, rounds = sim_local_search(staged(g), [1, 2], 2, lab)
    assert res[1].found == 0 and res[2].found == 0 and rounds <= 4


def test_local_search_tie_breaks():
    # from 4, nodes 1 and 2 are both two hops away; 2 has the smaller label
    g = DynamicGraph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
    labels = [0, 3, 1, 5, 6]
    v, d, route, _ = local_search(g, 4, 3, labels)
    assert (v, d, route) == (3, 1, [4, 3])
    labels = [0, 3, 1, 9, 6]
    v, d, route, _ = local_search(g, 4, 3, labels)
    assert (v, d, route) == (2, 2, [4, 3, 2])


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 20), st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 5))
def test_parallel_search_matches_sequential_and_bound(n, seed, k, depth):
    rng = random.Random(seed)
    g = DynamicGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.25])
    labels = [rng.randint(0, n) for _ in range(n)]
    orphans = rng.sample(range(n), min(k, n))
    res, rounds = sim_local_search(staged(g), orphans, depth, labels)
    assert rounds <= len(orphans) * depth
    for u in orphans:
        v, d, route, _ = local_search(g, u, depth, labels)
        assert (res[u].found, res[u].distance, res[u].route) == (v, d, route)


def test_report_increase_outcomes():
    g = path(9)
    out = sim_report_increase(staged(g), 4, 0, 8)
    assert out.new_phase and out.rounds >= 4
    # a split-off component of five nodes
    g = DynamicGraph(8, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)])
    out = sim_report_increase(staged(g), 5, 0, 4)
    assert not out.new_phase and out.deactivated == {3, 4, 5, 6, 7} and out.rounds == 5
    # witness exactly at the cap is still within the 2X radius
    out = sim_report_increase(staged(path(5)), 4, 0, 4)
    assert out.new_phase
