"""Geometric state space of a lock program.

The state space is the integer box ``[0, N1] x ... x [0, Nn]`` minus a union of
open isothetic boxes with integer bounds. Coordinate ``i`` counts the
instructions process ``i`` has completed; executing instruction ``j`` moves the
coordinate from ``j - 1`` to ``j``.

Because every bound is an integer, a closed unit cell of the grid either lies
inside the state space or its relative interior meets a box, so all queries
below are exact integer comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .pv import Program

Vertex = tuple[int, ...]


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class OpenBox:
    """Product of open intervals ``(lower[i], upper[i])``.

    An unconstrained axis carries the sentinel ``(-1, N + 1)``.
    """

    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(self.lower))
        object.__setattr__(self, "upper", tuple(self.upper))
        if len(self.lower) != len(self.upper):
            raise GeometryError("box bounds have different dimensions")
        for i, (l, u) in enumerate(zip(self.lower, self.upper)):
            if u <= l:
                raise GeometryError(f"box has empty interior on axis {i + 1}: ({l}, {u})")

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, point: Sequence) -> bool:
        return all(l < x < u for l, x, u in zip(self.lower, point, self.upper))

    def overlaps(self, other: OpenBox) -> bool:
        """True iff the two open boxes share an interior point."""
        return all(l1 < u2 and l2 < u1 for l1, u1, l2, u2 in zip(self.lower, self.upper, other.lower, other.upper))

    def is_full(self, axis: int, extents: Sequence[int]) -> bool:
        return self.lower[axis] < 0 and self.upper[axis] > extents[axis]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.lower, self.upper))


def full_box(constrained: dict[int, tuple[int, int]], extents: Sequence[int]) -> OpenBox:
    lower = [-1] * len(extents)
    upper = [n + 1 for n in extents]
    for axis, (l, u) in constrained.items():
        lower[axis], upper[axis] = l, u
    return OpenBox(tuple(lower), tuple(upper))


@dataclass(frozen=True)
class StateSpace:
    extents: tuple[int, ...]
    boxes: tuple[OpenBox, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(self.extents))
        object.__setattr__(self, "boxes", tuple(self.boxes))
        if any(n < 0 for n in self.extents):
            raise GeometryError("extents must be nonnegative")
        for b in self.boxes:
            if b.dim != self.n:
                raise GeometryError(f"box of dimension {b.dim} in a {self.n}-dimensional space")
            constrained = 0
            for i, (l, u) in enumerate(b.pairs()):
                if b.is_full(i, self.extents):
                    continue
                if l < 0 or u > self.extents[i]:
                    raise GeometryError(f"box bound ({l}, {u}) outside [0, {self.extents[i]}] on axis {i + 1}")
                constrained += 1
            if constrained == 0:
                raise GeometryError("box constrains no axis")

    @property
    def n(self) -> int:
        return len(self.extents)

    @property
    def bottom(self) -> Vertex:
        return (0,) * self.n

    @property
    def top(self) -> Vertex:
        return self.extents

    def vertices(self) -> Iterator[Vertex]:
        """All grid vertices in lexicographic order (a topological order)."""
        return itertools.product(*(range(n + 1) for n in self.extents))

    def in_range(self, v: Sequence[int]) -> bool:
        return len(v) == self.n and all(0 <= x <= n for x, n in zip(v, self.extents))

    def is_free(self, v: Sequence[int]) -> bool:
        return not any(b.contains(v) for b in self.boxes)

    @cached_property
    def _edges(self) -> dict[tuple[Vertex, int], bool]:
        return {}

    @cached_property
    def _squares(self) -> dict[tuple[Vertex, int, int], bool]:
        return {}

    def permute(self, perm: Sequence[int]) -> StateSpace:
        """Axis ``k`` of the result is axis ``perm[k]`` of this space."""
        return StateSpace(
            tuple(self.extents[p] for p in perm),
            tuple(OpenBox(tuple(b.lower[p] for p in perm), tuple(b.upper[p] for p in perm)) for b in self.boxes),
        )


def holding_intervals(p: Program) -> dict[tuple[int, str], list[tuple[int, int]]]:
    """Open intervals during which each process holds each lock.

    An acquire at 1-based position ``a`` matched by a release at ``v`` gives the
    interval ``(a - 1, v)``.
    """
    out: dict[tuple[int, str], list[tuple[int, int]]] = {}
    for k, proc in enumerate(p.processes):
        for lock in p.semaphores:
            out[(k, lock)] = []
        start: dict[str, int] = {}
        for j, ins in enumerate(proc.instructions, start=1):
            if ins.op == "P":
                start[ins.lock] = j
            else:
                out[(k, ins.lock)].append((start.pop(ins.lock) - 1, j))
    return out


def forbidden_rects(p: Program) -> list[OpenBox]:
    """Boxes where more processes hold some lock than its capacity allows."""
    intervals = holding_intervals(p)
    extents = p.extents
    boxes = []
    for lock, cap in p.semaphores.items():
        holders = [k for k in range(p.n) if intervals[(k, lock)]]
        for group in itertools.combinations(holders, cap + 1):
            for choice in itertools.product(*(intervals[(k, lock)] for k in group)):
                boxes.append(full_box(dict(zip(group, choice)), extents))
    return boxes


def build_state_space(p: Program) -> StateSpace:
    return StateSpace(p.extents, tuple(forbidden_rects(p)))


def _check_vertex(s: StateSpace, v: Sequence[int], *axes: int) -> None:
    if not s.in_range(v):
        raise GeometryError(f"vertex {tuple(v)} outside extents {s.extents}")
    for i in axes:
        if not 0 <= i < s.n:
            raise GeometryError(f"axis {i} out of range")
        if v[i] >= s.extents[i]:
            raise GeometryError(f"no edge leaves {tuple(v)} along axis {i + 1}")


def _blocks_cell(b: OpenBox, v: Sequence[int], axes: Sequence[int]) -> bool:
    # The closed unit cell at v extruded along `axes` meets the open box.
    for j, x in enumerate(v):
        l, u = b.lower[j], b.upper[j]
        if j in axes:
            if not (x < u and x + 1 > l):
                return False
        elif not (l < x < u):
            return False
    return True


def edge_allowed(s: StateSpace, v: Sequence[int], i: int) -> bool:
    """Whether the unit edge from ``v`` along axis ``i`` (0-based) lies in the state space."""
    key = (tuple(v), i)
    cached = s._edges.get(key)
    if cached is None:
        _check_vertex(s, v, i)
        cached = not any(_blocks_cell(b, v, (i,)) for b in s.boxes)
        s._edges[key] = cached
    return cached


def square_free(s: StateSpace, v: Sequence[int], i: int, j: int) -> bool:
    """Whether the closed unit square at ``v`` spanned by axes ``i``, ``j`` lies in the state space."""
    if i == j:
        raise GeometryError("square needs two distinct axes")
    if i > j:
        i, j = j, i
    key = (tuple(v), i, j)
    cached = s._squares.get(key)
    if cached is None:
        _check_vertex(s, v, i, j)
        v = tuple(v)
        vi = v[:i] + (v[i] + 1,) + v[i + 1:]
        vj = v[:j] + (v[j] + 1,) + v[j + 1:]
        cached = (
            edge_allowed(s, v, i)
            and edge_allowed(s, v, j)
            and edge_allowed(s, vj, i)
            and edge_allowed(s, vi, j)
            and not any(_blocks_cell(b, v, (i, j)) for b in s.boxes)
        )
        s._squares[key] = cached
    return cached


def in_xk(s: StateSpace, v: Sequence[int], k: int) -> bool:
    """Whether at most ``k`` coordinates of ``v`` are strictly between 0 and their extent."""
    if not 0 <= k <= s.n:
        raise GeometryError(f"k must lie in [0, {s.n}]")
    extreme = sum(1 for x, n in zip(v, s.extents) if x == 0 or x == n)
    return extreme >= s.n - k


def cell_free(s: StateSpace, v: Sequence[int], axes: Sequence[int]) -> bool:
    """Whether the closed cell at ``v`` extruded along ``axes`` avoids every box."""
    return not any(_blocks_cell(b, v, axes) for b in s.boxes)


def load_boxes(source: str) -> StateSpace:
    """Parse the ``.boxes`` format.

    ::

        extents 4 4
        box 0 2 2 4     # (0,2) x (2,4)
        box * * 1 3     # axis 0 unconstrained
    """
    extents = None
    boxes = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        try:
            if tokens[0] == "extents":
                if extents is not None:
                    raise GeometryError("duplicate extents line")
                extents = tuple(int(t) for t in tokens[1:])
                if any(n < 0 for n in extents):
                    raise GeometryError("extents must be nonnegative")
            elif tokens[0] == "box":
                if extents is None:
                    raise GeometryError("'extents' line must come first")
                bounds = tokens[1:]
                if len(bounds) != 2 * len(extents):
                    raise GeometryError(f"expected {2 * len(extents)} bounds, got {len(bounds)}")
                lower, upper = [], []
                for axis in range(len(extents)):
                    lt, ut = bounds[2 * axis], bounds[2 * axis + 1]
                    if (lt == "*") != (ut == "*"):
                        raise GeometryError("'*' must mark both bounds of an axis")
                    if lt == "*":
                        lower.append(-1)
                        upper.append(extents[axis] + 1)
                    else:
                        l, u = int(lt), int(ut)
                        if u <= l:
                            raise GeometryError(f"empty interior ({l}, {u}) on axis {axis + 1}")
                        if l < 0 or u > extents[axis]:
                            raise GeometryError(f"bound ({l}, {u}) outside [0, {extents[axis]}] on axis {axis + 1}")
                        lower.append(l)
                        upper.append(u)
                boxes.append(OpenBox(tuple(lower), tuple(upper)))
            else:
                raise GeometryError(f"unexpected {tokens[0]!r}")
        except ValueError as exc:
            raise GeometryError(f"line {lineno}: {exc}") from None
    if extents is None:
        raise GeometryError("missing 'extents' line")
    try:
        return StateSpace(extents, tuple(boxes))
    except GeometryError as exc:
        raise GeometryError(f"{exc}") from None


def render_boxes(s: StateSpace) -> str:
    lines = [" ".join(["extents", *map(str, s.extents)])]
    for b in s.boxes:
        parts = []
        for i, (l, u) in enumerate(b.pairs()):
            parts += ["*", "*"] if b.is_full(i, s.extents) else [str(l), str(u)]
        lines.append("box " + " ".join(parts))
    return "\n".join(lines) + "\n"
