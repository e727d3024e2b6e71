"""Schedules, their dihomotopy classes, and serializability.

A schedule is a word over 1-based process indices; it traces a monotone
lattice path from the bottom to the top vertex of the state space. Two
schedules are dihomotopic when a chain of elementary swaps connects them, a
swap exchanging adjacent distinct letters across a unit square that lies in
the state space.

Two routes compute the classes:

* ``method="enumerate"`` lists every valid schedule and takes connected
  components of the swap graph.
* ``method="sweep"`` walks the grid once in topological order. The classes of
  paths ending at ``v`` are the classes at each predecessor ``v - e_i``,
  extended by letter ``i``, glued along every free square whose top corner
  is ``v``. Swaps deeper in a path are already accounted for at the
  predecessor, so this yields the same partition without listing paths.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import CapExceeded, IndeterminateVerdict
from .execution import safe_set
from .geometry import StateSpace, Vertex, edge_allowed, in_xk, square_free

Word = tuple[int, ...]
WordLike = Union[str, Sequence[int]]

DEFAULT_MAX_PATHS = 200_000
DEFAULT_MAX_CLASS_SIZE = 1_000_000


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    max_paths: int = DEFAULT_MAX_PATHS
    max_class_size: int = DEFAULT_MAX_CLASS_SIZE

    @classmethod
    def from_env(cls, max_paths: Optional[int] = None, max_class_size: Optional[int] = None) -> Caps:
        """Explicit values win over ``DIHOMO_MAX_PATHS``, which wins over the default."""
        if max_paths is None:
            env = os.environ.get("DIHOMO_MAX_PATHS")
            max_paths = int(env) if env else DEFAULT_MAX_PATHS
        if max_class_size is None:
            max_class_size = DEFAULT_MAX_CLASS_SIZE
        if max_paths <= 0 or max_class_size <= 0:
            raise ValueError("caps must be positive")
        return cls(max_paths, max_class_size)


@dataclass(frozen=True)
class DihomotopyClass:
    representative: Word
    size: int
    has_serial: bool
    truncated: bool = False


@dataclass(frozen=True)
class Verdict:
    serializable: Optional[bool]
    witness: Optional[Word] = None
    classes: Optional[int] = None
    indeterminate: bool = False
    reason: Optional[str] = None


def as_word(w: WordLike) -> Word:
    if isinstance(w, str):
        return tuple(int(ch) for ch in w)
    return tuple(int(x) for x in w)


def word_str(w: Sequence[int]) -> str:
    if all(1 <= x <= 9 for x in w):
        return "".join(map(str, w))
    return " ".join(map(str, w))


def _step(v: Vertex, i: int) -> Vertex:
    return v[:i] + (v[i] + 1,) + v[i + 1:]


def schedule_vertices(s: StateSpace, w: WordLike) -> list[Vertex]:
    """Vertices visited by ``w``, starting at the bottom; no validity check."""
    v = s.bottom
    out = [v]
    for letter in as_word(w):
        v = _step(v, letter - 1)
        out.append(v)
    return out


def schedule_valid(s: StateSpace, w: WordLike) -> bool:
    """True iff ``w`` is a complete execution through allowed edges.

    Raises ScheduleError when the letter counts do not match the extents;
    a blocked edge just returns False.
    """
    w = as_word(w)
    if any(not 1 <= x <= s.n for x in w):
        raise ScheduleError(f"letters must lie in 1..{s.n}")
    counts = tuple(w.count(k) for k in range(1, s.n + 1))
    if counts != s.extents:
        raise ScheduleError(f"letter multiplicities {counts} do not match extents {s.extents}")
    v = s.bottom
    for letter in w:
        if not edge_allowed(s, v, letter - 1):
            return False
        v = _step(v, letter - 1)
    return True


def enumerate_schedules(s: StateSpace, cap: int = DEFAULT_MAX_PATHS) -> list[Word]:
    """All valid complete schedules in lexicographic order."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    safe = safe_set(s)
    if s.bottom not in safe:
        return []
    out: list[Word] = []
    top = s.top
    prefix: list[int] = []

    def dfs(v: Vertex) -> None:
        if v == top:
            if len(out) >= cap:
                raise CapExceeded("schedules", cap, len(out) + 1)
            out.append(tuple(prefix))
            return
        for i in range(s.n):
            if v[i] < s.extents[i] and edge_allowed(s, v, i):
                w = _step(v, i)
                if w in safe:
                    prefix.append(i + 1)
                    dfs(w)
                    prefix.pop()

    dfs(s.bottom)
    return out


def elementary_swap(s: StateSpace, w: WordLike, pos: int) -> Optional[Word]:
    """Swap letters ``pos`` and ``pos + 1`` (1-based) across a free square, if possible."""
    w = as_word(w)
    if not 1 <= pos < len(w):
        raise IndexError(f"pos must lie in 1..{len(w) - 1}")
    a, b = w[pos - 1], w[pos]
    if a == b:
        return None
    v = s.bottom
    for letter in w[: pos - 1]:
        v = _step(v, letter - 1)
    if not square_free(s, v, a - 1, b - 1):
        return None
    return w[: pos - 1] + (b, a) + w[pos + 1:]


def is_serial(w: WordLike) -> bool:
    """True iff each process runs in one contiguous block."""
    seen = set()
    prev = None
    for letter in as_word(w):
        if letter != prev:
            if letter in seen:
                return False
            seen.add(letter)
            prev = letter
    return True


def serial_schedules(s: StateSpace) -> list[Word]:
    """Distinct serial words with the right letter counts, valid or not."""
    words = set()
    for order in itertools.permutations(range(1, s.n + 1)):
        words.add(tuple(k for k in order for _ in range(s.extents[k - 1])))
    return sorted(words)


def _enumerated_classes(s: StateSpace, path_cap: int, class_cap: int) -> list[DihomotopyClass]:
    schedules = enumerate_schedules(s, path_cap)
    seen: set[Word] = set()
    classes = []
    for seed in schedules:
        if seed in seen:
            continue
        members = [seed]
        seen.add(seed)
        truncated = False
        head = 0
        while head < len(members):
            w = members[head]
            head += 1
            for pos in range(1, len(w)):
                x = elementary_swap(s, w, pos)
                if x is not None and x not in seen:
                    if len(members) >= class_cap:
                        truncated = True
                        continue
                    seen.add(x)
                    members.append(x)
        classes.append(DihomotopyClass(min(members), len(members), any(map(is_serial, members)), truncated))
    classes.sort(key=lambda c: c.representative)
    return classes


@dataclass
class _Sweep:
    # classes[v] = [(representative, size), ...]; ext[(u, i)][c] = class at u + e_i of class c at u
    classes: dict[Vertex, list[tuple[Word, int]]]
    ext: dict[tuple[Vertex, int], list[int]]

    def locate(self, s: StateSpace, w: Word) -> Optional[int]:
        v, c = s.bottom, 0
        for letter in w:
            i = letter - 1
            if v not in self.classes or (v, i) not in self.ext:
                return None
            c = self.ext[(v, i)][c]
            v = _step(v, i)
        return c


def _sweep(s: StateSpace, max_classes: int) -> _Sweep:
    bottom = s.bottom
    classes: dict[Vertex, list[tuple[Word, int]]] = {bottom: [((), 1)]}
    ext: dict[tuple[Vertex, int], list[int]] = {}
    total = 1
    for v in s.vertices():
        if v == bottom:
            continue
        nodes: list[tuple[int, int, Vertex]] = []
        index: dict[tuple[int, int], int] = {}
        for i in range(s.n):
            if v[i] == 0:
                continue
            u = v[:i] + (v[i] - 1,) + v[i + 1:]
            if u not in classes or not edge_allowed(s, u, i):
                continue
            for c in range(len(classes[u])):
                index[(i, c)] = len(nodes)
                nodes.append((i, c, u))
        if not nodes:
            continue

        parent = list(range(len(nodes)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in itertools.combinations(range(s.n), 2):
            if v[i] == 0 or v[j] == 0:
                continue
            u = v[:i] + (v[i] - 1,) + v[i + 1:]
            u = u[:j] + (u[j] - 1,) + u[j + 1:]
            if u not in classes or not square_free(s, u, i, j):
                continue
            # path q.i.j at v has prefix class ext[u,i][q]; q.j.i has ext[u,j][q]
            for c in range(len(classes[u])):
                a = find(index[(j, ext[(u, i)][c])])
                b = find(index[(i, ext[(u, j)][c])])
                if a != b:
                    parent[max(a, b)] = min(a, b)

        groups: dict[int, list[int]] = {}
        for k in range(len(nodes)):
            groups.setdefault(find(k), []).append(k)
        merged = []
        for members in groups.values():
            rep = min(classes[nodes[k][2]][nodes[k][1]][0] + (nodes[k][0] + 1,) for k in members)
            size = sum(classes[nodes[k][2]][nodes[k][1]][1] for k in members)
            merged.append((rep, size, members))
        merged.sort(key=lambda m: m[0])
        total += len(merged)
        if total > max_classes:
            raise CapExceeded("tracked classes", max_classes, total)
        classes[v] = [(rep, size) for rep, size, _ in merged]
        for idx, (_, _, members) in enumerate(merged):
            for k in members:
                i, c, u = nodes[k]
                ext.setdefault((u, i), [0] * len(classes[u]))[c] = idx
    return _Sweep(classes, ext)


def _swept_classes(s: StateSpace, class_cap: int) -> list[DihomotopyClass]:
    sweep = _sweep(s, class_cap)
    top_classes = sweep.classes.get(s.top, [])
    serial = set()
    for w in serial_schedules(s):
        if schedule_valid(s, w):
            serial.add(sweep.locate(s, w))
    return [DihomotopyClass(rep, size, k in serial) for k, (rep, size) in enumerate(top_classes)]


def dihomotopy_classes(
    s: StateSpace,
    path_cap: int = DEFAULT_MAX_PATHS,
    class_cap: int = DEFAULT_MAX_CLASS_SIZE,
    method: str = "enumerate",
) -> list[DihomotopyClass]:
    """Dihomotopy classes of complete schedules, ordered by representative.

    With ``method="enumerate"`` the caps bound the number of schedules and the
    size of each swap-graph component (a component hitting ``class_cap`` is
    flagged ``truncated``). With ``method="sweep"`` ``class_cap`` bounds the
    number of classes tracked over the whole grid and ``path_cap`` is unused.
    """
    if method == "enumerate":
        return _enumerated_classes(s, path_cap, class_cap)
    if method == "sweep":
        return _swept_classes(s, class_cap)
    raise ValueError(f"unknown method {method!r}")


def is_serializable(s: StateSpace, caps: Optional[Caps] = None, method: str = "sweep") -> Verdict:
    """Whether every dihomotopy class of complete schedules contains a serial one."""
    caps = caps or Caps()
    try:
        classes = dihomotopy_classes(s, caps.max_paths, caps.max_class_size, method)
    except CapExceeded as exc:
        return Verdict(None, indeterminate=True, reason=str(exc))
    if any(c.truncated for c in classes):
        return Verdict(None, classes=len(classes), indeterminate=True, reason="class size cap reached")
    bad = [c.representative for c in classes if not c.has_serial]
    return Verdict(not bad, min(bad) if bad else None, len(classes))


def pi10_quotient_trivial(s: StateSpace, caps: Optional[Caps] = None, method: str = "sweep") -> bool:
    """Triviality of the fundamental monoid of the state space relative to its serial part.

    Decided operationally as serializability; raises CapExceeded when the caps
    prevent a verdict.
    """
    verdict = is_serializable(s, caps, method)
    if verdict.indeterminate:
        raise IndeterminateVerdict(verdict.reason)
    return bool(verdict.serializable)


def visits_only_x1(s: StateSpace, w: WordLike) -> bool:
    """Whether the path of ``w`` stays in X_1, edge interiors included."""
    w = as_word(w)
    vs = schedule_vertices(s, w)
    if not all(in_xk(s, v, 1) for v in vs):
        return False
    # along an edge the moving coordinate is strictly inside its range
    for v, letter in zip(vs, w):
        if any(0 < x < n for a, (x, n) in enumerate(zip(v, s.extents)) if a != letter - 1):
            return False
    return True


def census(classes: Iterable[DihomotopyClass]) -> dict:
    classes = list(classes)
    return {
        "count": len(classes),
        "classes": [
            {
                "representative": word_str(c.representative),
                "size": c.size,
                "has_serial": c.has_serial,
                "truncated": c.truncated,
            }
            for c in classes
        ],
    }
