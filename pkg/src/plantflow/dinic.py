"""Dinic maximum flow over flat residual arrays.

Sized for the graphs this package builds (tens to a few hundred arcs), so the
representation favours simple Python lists: arc 2a is the forward copy of
input arc a and arc 2a+1 its reverse, residual capacities live in one flat
list, and the blocking-flow search is iterative with current-arc pointers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

_EPS = 1e-12  # residual below this counts as saturated


@dataclass(frozen=True)
class MaxFlowResult:
    """value is the flow found; arc_flow[a] is the flow on input arc a.

    When a cutoff stops the search early, value is the flow at the moment the
    cutoff was met (>= cutoff) and arc_flow describes that partial flow, not
    a maximum one.
    """

    value: float
    arc_flow: tuple[float, ...]


def max_flow(
    num_vertices: int,
    source: int,
    sink: int,
    tails,
    heads,
    caps,
    cutoff: float | None = None,
) -> MaxFlowResult:
    """Maximum flow from source to sink; arcs are parallel-safe and directed.

    cutoff, when given, stops the search as soon as the accumulated flow
    reaches it (exact >= comparison, no tolerance), which makes threshold
    predicates cheap without changing their outcome.
    """
    a_count = len(caps)
    to = [0] * (2 * a_count)
    res = [0.0] * (2 * a_count)
    adj: list[list[int]] = [[] for _ in range(num_vertices)]
    for a in range(a_count):
        t, h = int(tails[a]), int(heads[a])
        to[2 * a] = h
        to[2 * a + 1] = t
        res[2 * a] = float(caps[a])
        adj[t].append(2 * a)
        adj[h].append(2 * a + 1)

    flow = 0.0
    level = [-1] * num_vertices
    while True:
        for i in range(num_vertices):
            level[i] = -1
        level[source] = 0
        queue = deque((source,))
        while queue:
            v = queue.popleft()
            for a in adj[v]:
                w = to[a]
                if level[w] < 0 and res[a] > _EPS:
                    level[w] = level[v] + 1
                    queue.append(w)
        if level[sink] < 0:
            break

        cursor = [0] * num_vertices
        path: list[int] = []
        v = source
        while True:
            if v == sink:
                pushed = min(res[a] for a in path)
                for a in path:
                    res[a] -= pushed
                    res[a ^ 1] += pushed
                flow += pushed
                if cutoff is not None and flow >= cutoff:
                    return _collect(flow, a_count, res)
                v = source
                path.clear()
                continue
            moved = False
            while cursor[v] < len(adj[v]):
                a = adj[v][cursor[v]]
                w = to[a]
                if res[a] > _EPS and level[w] == level[v] + 1:
                    path.append(a)
                    v = w
                    moved = True
                    break
                cursor[v] += 1
            if moved:
                continue
            if v == source:
                break
            dead = path.pop()
            v = to[dead ^ 1]
            cursor[v] += 1

    return _collect(flow, a_count, res)


def _collect(flow: float, a_count: int, res: list[float]) -> MaxFlowResult:
    # reverse residual equals the flow carried by the forward arc
    return MaxFlowResult(flow, tuple(res[2 * a + 1] for a in range(a_count)))
