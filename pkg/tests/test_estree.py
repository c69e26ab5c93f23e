from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from lazybfs.estree import DECREMENTAL, INCREMENTAL, EsTree, EsUsageError
from lazybfs.graph import INF, DynamicGraph, bfs_distances


def capped(g, s, cap):
    return [d if d <= cap else INF for d in bfs_distances(g, s)]


def test_insert_shortcut_on_path():
    g = DynamicGraph(4, [(0, 1), (1, 2), (2, 3)])
    t = EsTree(g, 0, 10, INCREMENTAL)
    g.insert_edge(3, 0)
    t.insert(3, 0)
    assert t.level == [0, 1, 2, 1]
    assert t.path(2) == [2, 1, 0]


def test_insert_two_hop_shortcut():
    g = DynamicGraph(4, [(0, 1), (1, 2), (2, 3)])
    t = EsTree(g, 0, 10, INCREMENTAL)
    g.insert_edge(2, 0)
    t.insert(2, 0)
    assert t.level == [0, 1, 1, 2]
    t.check_invariants()


def test_delete_on_cycle_and_path():
    g = DynamicGraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    t = EsTree(g, 0, 10, DECREMENTAL)
    g.delete_edge(3, 0)
    t.delete(3, 0)
    assert t.level == [0, 1, 2, 3]
    g = DynamicGraph(4, [(0, 1), (1, 2), (2, 3)])
    t = EsTree(g, 0, 10, DECREMENTAL)
    g.delete_edge(2, 3)
    t.delete(2, 3)
    assert t.level == [0, 1, 2, INF]


def test_depth_cap_expels():
    g = DynamicGraph(5, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 3)])
    t = EsTree(g, 0, 2, DECREMENTAL)
    assert t.level[3] == 2
    g.delete_edge(4, 3)
    t.delete(4, 3)
    assert t.level[3] == INF


def test_wrong_direction():
    g = DynamicGraph(2, [(0, 1)])
    with pytest.raises(EsUsageError):
        EsTree(g, 0, 3, INCREMENTAL).delete(0, 1)
    with pytest.raises(EsUsageError):
        EsTree(g, 0, 3, DECREMENTAL).insert(0, 1)
    with pytest.raises(ValueError):
        EsTree(g, 0, 3, "both")


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 25), st.integers(1, 12), st.integers(0, 10**6), st.booleans())
def test_exact_against_oracle(n, cap, seed, incremental):
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    if incremental:
        g = DynamicGraph(n, pairs[: n // 2])
        ops = pairs[n // 2: n // 2 + 2 * n]
        t = EsTree(g, 0, cap, INCREMENTAL)
    else:
        g = DynamicGraph(n, pairs[: 3 * n])
        ops = list(g.edges())
        rng.shuffle(ops)
        t = EsTree(g, 0, cap, DECREMENTAL)
    peak_m = g.m
    for u, v in ops:
        if incremental:
            g.insert_edge(u, v)
            t.insert(u, v)
        else:
            g.delete_edge(u, v)
            t.delete(u, v)
        peak_m = max(peak_m, g.m)
        assert t.level == capped(g, 0, cap)
        t.check_invariants()
    assert t.work <= 10 * max(peak_m, 1) * cap + t.updates
