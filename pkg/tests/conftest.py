from __future__ import annotations

import heapq

from lazybfs.graph import INF


def dijkstra(g, s):
    """Independent unit-weight shortest paths, used as a second oracle next to BFS."""
    dist = [INF] * g.n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for y in g.adj[x]:
            if d + 1 < dist[y]:
                dist[y] = d + 1
                heapq.heappush(heap, (d + 1, y))
    return dist


# one summary line per acceptance criterion, echoed after the test run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
