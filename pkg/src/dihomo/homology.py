"""Integer cubical homology of a state space and of the pair (X, X_1)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .geometry import StateSpace, cell_free
from .snf import invariant_factors

Cell = tuple[tuple[int, ...], tuple[int, ...]]  # (base vertex, sorted extruded axes)


@dataclass(frozen=True)
class CubicalComplex:
    extents: tuple[int, ...]
    cells: tuple[tuple[Cell, ...], ...]  # cells[d], sorted
    _index: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        self._index.extend({c: k for k, c in enumerate(cs)} for cs in self.cells)

    @property
    def n(self) -> int:
        return len(self.extents)

    def count(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    def __contains__(self, cell: Cell) -> bool:
        d = len(cell[1])
        return d < len(self._index) and cell in self._index[d]

    def index(self, cell: Cell) -> int:
        return self._index[len(cell[1])][cell]


def faces(cell: Cell) -> list[tuple[int, Cell]]:
    """Signed codimension-one faces: ``(-1)**k * (front - back)`` for the k-th extruded axis."""
    v, axes = cell
    out = []
    for k, a in enumerate(axes):
        rest = axes[:k] + axes[k + 1:]
        sign = -1 if k % 2 else 1
        front = v[:a] + (v[a] + 1,) + v[a + 1:]
        out.append((sign, (front, rest)))
        out.append((-sign, (v, rest)))
    return out


def build_complex(s: StateSpace) -> CubicalComplex:
    """All closed grid cells disjoint from the forbidden region."""
    by_dim: list[list[Cell]] = [[] for _ in range(s.n + 1)]
    for v in s.vertices():
        for d in range(s.n + 1):
            for axes in itertools.combinations(range(s.n), d):
                if all(v[a] < s.extents[a] for a in axes) and cell_free(s, v, axes):
                    by_dim[d].append((v, axes))
    return CubicalComplex(s.extents, tuple(tuple(sorted(cs)) for cs in by_dim))


def _filter(c: CubicalComplex, keep) -> CubicalComplex:
    return CubicalComplex(c.extents, tuple(tuple(x for x in cs if keep(x)) for cs in c.cells))


def in_x1(extents: tuple[int, ...], cell: Cell) -> bool:
    v, axes = cell
    pinned = sum(1 for a, x in enumerate(v) if a not in axes and (x == 0 or x == extents[a]))
    return pinned >= len(extents) - 1


def sub_complex_x1(c: CubicalComplex) -> CubicalComplex:
    """Cells lying entirely in the part of the space where at most one process is mid-run."""
    return _filter(c, lambda cell: in_x1(c.extents, cell))


def is_subcomplex(sub: CubicalComplex, c: CubicalComplex) -> bool:
    return sub.extents == c.extents and all(cell in c for cs in sub.cells for cell in cs)


def check_closure(c: CubicalComplex) -> bool:
    return all(face in c for cs in c.cells for cell in cs for _, face in faces(cell))


@dataclass(frozen=True)
class BoundaryMatrix:
    rows: tuple[Cell, ...]  # (d-1)-cells
    cols: tuple[Cell, ...]  # d-cells
    data: list[list[int]]


def boundary_matrix(c: CubicalComplex, d: int, sub: Optional[CubicalComplex] = None) -> BoundaryMatrix:
    """Matrix of the boundary map from d-chains to (d-1)-chains, modulo ``sub`` if given."""

    def live(k: int) -> tuple[Cell, ...]:
        cs = c.cells[k] if 0 <= k < len(c.cells) else ()
        return tuple(x for x in cs if sub is None or x not in sub)

    rows, cols = live(d - 1), live(d)
    rindex = {cell: k for k, cell in enumerate(rows)}
    data = [[0] * len(cols) for _ in rows]
    for j, cell in enumerate(cols):
        for sign, face in faces(cell):
            i = rindex.get(face)
            if i is not None:
                data[i][j] += sign
    return BoundaryMatrix(rows, cols, data)


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = ["Z"] * (self.betti > 0)
        if self.betti > 1:
            parts = [f"Z^{self.betti}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def relative_homology(c: CubicalComplex, sub: Optional[CubicalComplex], d: int) -> HomologyGroup:
    """Homology in degree ``d`` of the chain complex C(c)/C(sub) (absolute when ``sub`` is None)."""
    if sub is not None and not is_subcomplex(sub, c):
        raise ValueError("sub is not a subcomplex")
    bd = boundary_matrix(c, d, sub)
    bd_up = boundary_matrix(c, d + 1, sub)
    chains = len(bd.cols)
    rank_d = len(invariant_factors(bd.data)) if bd.rows and bd.cols else 0
    up = invariant_factors(bd_up.data) if bd_up.rows and bd_up.cols else []
    return HomologyGroup(chains - rank_d - len(up), tuple(x for x in up if x > 1))


def homology(c: CubicalComplex, d: int) -> HomologyGroup:
    return relative_homology(c, None, d)


def vertex_components(c: CubicalComplex) -> int:
    """Path components of the complex by union-find on vertices and edges."""
    parent = {cell[0]: cell[0] for cell in c.cells[0]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, (a,) in (c.cells[1] if len(c.cells) > 1 else ()):
        w = v[:a] + (v[a] + 1,) + v[a + 1:]
        parent[find(v)] = find(w)
    return len({find(x) for x in parent})


def forbidden_components(s: StateSpace) -> int:
    """Connected components of the union of the open forbidden boxes."""
    boxes = s.boxes
    parent = list(range(len(boxes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(len(boxes)), 2):
        if boxes[i].overlaps(boxes[j]):
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(boxes))})


@dataclass(frozen=True)
class AlexanderResult:
    holds: bool
    h1_rank: int
    h1_torsion: tuple[int, ...]
    expected_rank: int
    components: int


def alexander_check(s: StateSpace) -> AlexanderResult:
    """Compare H_1(X, X_1) with the count of forbidden components (two processes only).

    For a planar state space, the duality predicts rank ``max(0, components - 1)``
    and no torsion.
    """
    if s.n != 2:
        raise ValueError("the duality check is defined for two processes only")
    c = build_complex(s)
    h1 = relative_homology(c, sub_complex_x1(c), 1)
    comps = forbidden_components(s)
    expected = max(0, comps - 1)
    return AlexanderResult(h1.betti == expected and not h1.torsion, h1.betti, h1.torsion, expected, comps)
