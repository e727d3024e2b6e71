"""Moore paths: piecewise-linear paths with an explicit duration.

A Moore path ``(f, t)`` runs on ``[0, t]`` and stays at its final point
afterwards. Composition concatenates and adds durations, giving a strict
category whose objects are points. All data are exact rationals, and paths
are kept in a canonical form (no breakpoint in the middle of a constant
velocity run), so equality of paths as functions is equality of
representations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import StateSpace

Point = tuple[Fraction, ...]


class MooreError(ValueError):
    pass


def _point(x: Iterable) -> Point:
    return tuple(Fraction(c) for c in x)


def _collinear(a: tuple[Fraction, Point], b: tuple[Fraction, Point], c: tuple[Fraction, Point]) -> bool:
    (t0, p0), (t1, p1), (t2, p2) = a, b, c
    d1, d2 = t1 - t0, t2 - t1
    return all((y1 - y0) * d2 == (y2 - y1) * d1 for y0, y1, y2 in zip(p0, p1, p2))


def _normalize(breakpoints: list[tuple[Fraction, Point]]) -> tuple[tuple[Fraction, Point], ...]:
    out: list[tuple[Fraction, Point]] = []
    for bp in breakpoints:
        if len(out) >= 2 and _collinear(out[-2], out[-1], bp):
            out[-1] = bp
        else:
            out.append(bp)
    return tuple(out)


@dataclass(frozen=True)
class MoorePath:
    breakpoints: tuple[tuple[Fraction, Point], ...]
    directed_axes: frozenset = frozenset()

    def __post_init__(self):
        bps = [(Fraction(t), _point(p)) for t, p in self.breakpoints]
        if not bps:
            raise MooreError("a Moore path needs at least one breakpoint")
        if bps[0][0] != 0:
            raise MooreError("first breakpoint must be at time 0")
        dim = len(bps[0][1])
        for (t0, _), (t1, p1) in zip(bps, bps[1:]):
            if t1 <= t0:
                raise MooreError("breakpoint times must increase strictly")
            if len(p1) != dim:
                raise MooreError("breakpoints have different dimensions")
        axes = frozenset(self.directed_axes)
        if any(not 0 <= a < dim for a in axes):
            raise MooreError("directed axis out of range")
        object.__setattr__(self, "breakpoints", _normalize(bps))
        object.__setattr__(self, "directed_axes", axes)

    @property
    def duration(self) -> Fraction:
        return self.breakpoints[-1][0]

    @property
    def dim(self) -> int:
        return len(self.breakpoints[0][1])


def identity_path(x: Sequence, directed_axes: Iterable[int] = ()) -> MoorePath:
    return MoorePath(((Fraction(0), _point(x)),), frozenset(directed_axes))


def dom(p: MoorePath) -> Point:
    return p.breakpoints[0][1]


def cod(p: MoorePath) -> Point:
    return p.breakpoints[-1][1]


def compose(second: MoorePath, first: MoorePath) -> MoorePath:
    """``second`` after ``first``: run ``first``, then ``second``; durations add."""
    if first.dim != second.dim:
        raise MooreError(f"dimension mismatch: {first.dim} vs {second.dim}")
    if first.directed_axes != second.directed_axes:
        raise MooreError("directed axes differ")
    if cod(first) != dom(second):
        raise MooreError(f"cod(first) = {cod(first)} differs from dom(second) = {dom(second)}")
    shift = first.duration
    bps = list(first.breakpoints) + [(t + shift, p) for t, p in second.breakpoints[1:]]
    return MoorePath(tuple(bps), first.directed_axes)


def evaluate(p: MoorePath, t) -> Point:
    t = Fraction(t)
    if t < 0:
        raise MooreError("time must be nonnegative")
    bps = p.breakpoints
    if t >= p.duration:
        return bps[-1][1]
    lo, hi = 0, len(bps) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bps[mid][0] <= t:
            lo = mid
        else:
            hi = mid
    (t0, p0), (t1, p1) = bps[lo], bps[hi]
    s = (t - t0) / (t1 - t0)
    return tuple(a + (b - a) * s for a, b in zip(p0, p1))


def is_dipath(p: MoorePath) -> bool:
    return all(
        q0[a] <= q1[a]
        for (_, q0), (_, q1) in zip(p.breakpoints, p.breakpoints[1:])
        for a in p.directed_axes
    )


def reverse(p: MoorePath) -> MoorePath:
    d = p.duration
    return MoorePath(tuple((d - t, x) for t, x in reversed(p.breakpoints)), p.directed_axes)


def schedule_to_moore(s: StateSpace, w) -> MoorePath:
    """Unit-speed realization of a valid schedule through the grid vertices."""
    from .dihomotopy import as_word, schedule_valid, schedule_vertices

    if not schedule_valid(s, w):
        raise MooreError("schedule crosses the forbidden region")
    return path_through(schedule_vertices(s, as_word(w)), range(s.n))


def path_through(vertices: Sequence[Sequence], directed_axes: Iterable[int] = ()) -> MoorePath:
    """Unit-time steps through the given points."""
    return MoorePath(tuple((Fraction(k), _point(v)) for k, v in enumerate(vertices)), frozenset(directed_axes))


def random_path(
    rng: random.Random,
    dim: int,
    start: Optional[Sequence] = None,
    max_pieces: int = 4,
    directed: bool = False,
    denominator: int = 6,
) -> MoorePath:
    """A random rational PL path; monotone in every axis when ``directed``."""

    def q(lo: int, hi: int) -> Fraction:
        return Fraction(rng.randint(lo * denominator, hi * denominator), denominator)

    x = _point(start) if start is not None else tuple(q(-3, 3) for _ in range(dim))
    bps = [(Fraction(0), x)]
    t = Fraction(0)
    for _ in range(rng.randint(0, max_pieces)):
        t += Fraction(rng.randint(1, 4 * denominator), denominator)
        step = tuple(q(0, 2) if directed else q(-2, 2) for _ in range(dim))
        x = tuple(a + b for a, b in zip(x, step))
        bps.append((t, x))
    return MoorePath(tuple(bps), frozenset(range(dim)) if directed else frozenset())


def random_composable_triple(rng: random.Random, dim: int, directed: bool = False):
    p = random_path(rng, dim, directed=directed)
    q = random_path(rng, dim, cod(p), directed=directed)
    r = random_path(rng, dim, cod(q), directed=directed)
    return p, q, r


def check_category_laws(p: MoorePath, q: MoorePath, r: MoorePath) -> dict[str, bool]:
    """Exact checks of the category axioms on a composable triple ``r . q . p``."""
    axes = p.directed_axes
    qp = compose(q, p)
    return {
        "associativity": compose(compose(r, q), p) == compose(r, qp),
        "left_unit": compose(identity_path(cod(p), axes), p) == p,
        "right_unit": compose(p, identity_path(dom(p), axes)) == p,
        "duration": qp.duration == p.duration + q.duration,
        "dom": dom(qp) == dom(p),
        "cod": cod(qp) == cod(q),
    }


def selftest(seed: int = 0, trials: int = 1000, dim: int = 2) -> dict[str, int]:
    """Failure counts per law over random rational triples (all zero when sound)."""
    rng = random.Random(seed)
    failures: dict[str, int] = {}
    for k in range(trials):
        directed = k % 2 == 1
        p, q, r = random_composable_triple(rng, dim, directed)
        laws = check_category_laws(p, q, r)
        if directed:
            laws["dipath_closure"] = is_dipath(compose(r, compose(q, p)))
        for name, ok in laws.items():
            failures[name] = failures.get(name, 0) + (not ok)
    return failures

