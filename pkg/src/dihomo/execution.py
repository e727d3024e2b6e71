"""Reachability analyses on the vertex grid of a state space."""

from __future__ import annotations

from collections import deque

from .geometry import StateSpace, Vertex, edge_allowed

VertexSet = frozenset


def successors(s: StateSpace, v: Vertex) -> list[Vertex]:
    out = []
    for i in range(s.n):
        if v[i] < s.extents[i] and edge_allowed(s, v, i):
            out.append(v[:i] + (v[i] + 1,) + v[i + 1:])
    return out


def predecessors(s: StateSpace, v: Vertex) -> list[Vertex]:
    out = []
    for i in range(s.n):
        if v[i] > 0:
            u = v[:i] + (v[i] - 1,) + v[i + 1:]
            if edge_allowed(s, u, i):
                out.append(u)
    return out


def _closure(start: Vertex, step) -> VertexSet:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in step(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def reachable_set(s: StateSpace) -> VertexSet:
    return _closure(s.bottom, lambda v: successors(s, v))


def safe_set(s: StateSpace) -> VertexSet:
    """Vertices from which the final state can still be reached."""
    return _closure(s.top, lambda v: predecessors(s, v))


def deadlocks(s: StateSpace) -> VertexSet:
    top = s.top
    return frozenset(v for v in reachable_set(s) if v != top and not successors(s, v))


def unsafe_region(s: StateSpace) -> VertexSet:
    return reachable_set(s) - safe_set(s)


def unreachable(s: StateSpace) -> VertexSet:
    """Free vertices that no execution reaches."""
    reach = reachable_set(s)
    return frozenset(v for v in s.vertices() if v not in reach and s.is_free(v))
