from collections import deque

import pytest

from gridembed.graph import FiniteGraph

ACCEPTANCE: list[tuple[int, str, bool]] = []


def record(number: int, name: str, ok: bool) -> None:
    ACCEPTANCE.append((number, name, ok))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {name}")


def bfs(G: FiniteGraph, s: int) -> dict[int, int]:
    """Plain BFS, independent of the library's memoised metric."""
    seen = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in G.adj[u]:
            if w not in seen:
                seen[w] = seen[u] + 1
                queue.append(w)
    return seen


def square_walk(R: int) -> list[tuple[int, int]]:
    """Boundary of [0,R]^2 by explicit unit steps: +x, +y, -x, -y."""
    pts, (x, y) = [], (0, 0)
    for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        for _ in range(R):
            pts.append((x, y))
            x, y = x + dx, y + dy
    return pts


@pytest.fixture
def two_edges():
    return FiniteGraph(4, [(0, 1), (2, 3)])
