from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from lazybfs.graph import INF, DynamicGraph, bfs_distances
from lazybfs.incremental import (COUNTER_FULL, DISTANCE_DECREASE, IncrementalPhase, NotCoveredError,
                                 RootComponent, distance_sum_drop_bound)


def p4():
    return DynamicGraph(4, [(0, 1), (1, 2), (2, 3)])


def test_init_and_depth_one():
    ph = IncrementalPhase(p4(), 0, 10, 1, 10)
    assert ph.label == [0, 1, 2, 3] and ph.k == 0 and ph.phases == 1
    ph = IncrementalPhase(p4(), 0, 10, 1, 1)
    assert ph.label == [0, 1, INF, INF]
    with pytest.raises(NotCoveredError):
        ph.path(3)


def test_small_delta_triggers_rebuild():
    g = p4()
    ph = IncrementalPhase(g, 0, 10, 1, 10)
    g.insert_edge(3, 0)
    out = ph.insert(3, 0)
    assert out.rebuilt and out.cause == DISTANCE_DECREASE and out.witness == 3
    assert ph.label == [0, 1, 2, 1]
    assert ph.phases == 2


def test_large_delta_stays_lazy():
    g = p4()
    ph = IncrementalPhase(g, 0, 10, 3, 10)
    g.insert_edge(3, 0)
    assert not ph.insert(3, 0).rebuilt
    assert ph.distance(3) == 3
    assert ph.path(3) == [3, 2, 1, 0]
    assert ph.path(0) == [0]
    assert 3 - 1 <= ph.kappa * ph.delta


def test_counter_full_with_kappa_one():
    g = p4()
    ph = IncrementalPhase(g, 0, 1, 5, 10)
    g.insert_edge(0, 2)
    out = ph.insert(0, 2)
    assert out.rebuilt and out.cause == COUNTER_FULL
    assert ph.causes() == {COUNTER_FULL: 1, DISTANCE_DECREASE: 0}


def test_parameters_validated():
    with pytest.raises(ValueError):
        IncrementalPhase(p4(), 0, 0, 1, 5)


def test_beyond_cap_counts_as_cap_plus_one():
    # node 4 sits at distance 4 > cap 2; a chord to the root shortens it to 1
    g = DynamicGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    ph = IncrementalPhase(g, 0, 10, 1, 2)
    g.insert_edge(4, 0)
    out = ph.insert(4, 0)
    assert out.rebuilt and out.cause == DISTANCE_DECREASE
    assert ph.label[4] == 1


def test_grafting_newly_connected_component():
    g = DynamicGraph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    ph = IncrementalPhase(g, 0, 10, 3, 10)
    assert ph.label[3:] == [INF, INF, INF]
    g.insert_edge(2, 4)
    out = ph.insert(2, 4)
    assert not out.rebuilt and out.grafted == 3
    assert ph.label == [0, 1, 2, 4, 3, 4]
    assert ph.path(5) == [5, 4, 2, 1, 0]
    # an edge inside the root component grafts nothing
    comp = RootComponent(g, 0)
    g.insert_edge(0, 5)
    assert comp.join(0, 5) == []


def test_drop_bound_values():
    assert [distance_sum_drop_bound(d) for d in (1, 2, 3, 4, 5, 6)] == [0, 0, 1, 2, 4, 6]


def _random_run(n, kappa, delta, cap, seed, audit=False):
    rng = random.Random(seed)
    g = DynamicGraph(n, [(i, i + 1) for i in range(n - 1) if rng.random() < 0.85])
    ph = IncrementalPhase(g, 0, kappa, delta, cap, audit=audit)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
    rng.shuffle(pairs)
    return g, ph, pairs[: 2 * n]


@settings(max_examples=80, deadline=None)
@given(st.integers(4, 30), st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_additive_guarantee(n, kappa, delta, seed):
    cap = n
    g, ph, ops = _random_run(n, kappa, delta, cap, seed)
    for u, v in ops:
        g.insert_edge(u, v)
        ph.insert(u, v)
        d = bfs_distances(g, 0)
        for x in range(n):
            if d[x] == INF:
                assert ph.label[x] == INF
            else:
                assert d[x] <= ph.label[x] <= d[x] + kappa * delta
        assert 0 <= ph.k < kappa


@settings(max_examples=80, deadline=None)
@given(st.integers(4, 30), st.integers(1, 6), st.integers(1, 8), st.integers(2, 12), st.integers(0, 10**6))
def test_capped_additive_guarantee(n, kappa, delta, cap, seed):
    g, ph, ops = _random_run(n, kappa, delta, cap, seed)
    for u, v in ops:
        g.insert_edge(u, v)
        ph.insert(u, v)
        d = bfs_distances(g, 0)
        for x in range(n):
            if ph.label[x] != INF:
                assert d[x] <= ph.label[x] <= d[x] + kappa * delta
            elif d[x] <= cap - kappa * delta:
                # nodes well inside the cap cannot be missing
                pytest.fail(f"node {x} at distance {d[x]} uncovered with cap {cap}")


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 30), st.integers(2, 8), st.integers(1, 6), st.integers(0, 10**6))
def test_trigger_soundness_and_phase_bound(n, kappa, delta, seed):
    g, ph, ops = _random_run(n, kappa, delta, n, seed, audit=True)
    for u, v in ops:
        g.insert_edge(u, v)
        out = ph.insert(u, v)
        if out.cause == DISTANCE_DECREASE:
            old = ph.rebuild_log[-1].old_dist
            assert old[out.witness] >= bfs_distances(g, 0)[out.witness] + delta
    q = len(ops)
    assert ph.phases <= q / kappa + 4 * n * n / delta ** 2 + 1
