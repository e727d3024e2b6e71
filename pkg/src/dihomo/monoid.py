"""Finite monoids, their nerve presentations, and group completion.

The fundamental monoid of the based classifying stream of a discrete monoid
``M`` is read off the 2-truncated nerve: one generator per non-identity
element, one relation ``g_a g_b = g_(ab)`` per 2-simplex. Completing that
presentation and multiplying normal forms must give back ``M``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import IndeterminateVerdict
from .rewriting import Census, Presentation, RewritingSystem, Word, census, knuth_bendix, normal_forms


@dataclass(frozen=True)
class MonoidTable:
    """Multiplication table with element 0 as the identity; ``table[a][b] = a * b``."""

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        t = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", t)
        m = len(t)
        if m == 0:
            raise ValueError("a monoid has at least one element")
        if any(len(row) != m for row in t):
            raise ValueError("table must be square")
        if any(not 0 <= x < m for row in t for x in row):
            raise ValueError("table entries must lie in 0..m-1")
        if any(t[0][x] != x or t[x][0] != x for x in range(m)):
            raise ValueError("element 0 is not a two-sided identity")
        for a, b, c in itertools.product(range(m), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError(f"not associative at ({a}, {b}, {c})")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


def parse_table(source: str) -> MonoidTable:
    lines = [ln.split("#", 1)[0].split() for ln in source.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0][0] != "order" or len(lines[0]) != 2:
        raise ValueError("expected 'order m' on the first line")
    m = int(lines[0][1])
    rows = lines[1:]
    if len(rows) != m:
        raise ValueError(f"expected {m} rows, got {len(rows)}")
    return MonoidTable(tuple(tuple(int(x) for x in row) for row in rows))


def render_table(t: MonoidTable) -> str:
    return "\n".join([f"order {t.order}"] + [" ".join(map(str, row)) for row in t.table]) + "\n"


def cyclic_group(m: int) -> MonoidTable:
    return MonoidTable(tuple(tuple((a + b) % m for b in range(m)) for a in range(m)))


def klein_four() -> MonoidTable:
    return MonoidTable(tuple(tuple(a ^ b for b in range(4)) for a in range(4)))


def idempotent() -> MonoidTable:
    return MonoidTable(((0, 1), (1, 1)))


def left_zero_with_identity() -> MonoidTable:
    # {1, a, b} with xy = x for x, y in {a, b}
    return MonoidTable(((0, 1, 2), (1, 1, 1), (2, 2, 2)))


CATALOG = {
    "trivial": lambda: cyclic_group(1),
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "klein4": klein_four,
    "idempotent": idempotent,
    "left-zero3": left_zero_with_identity,
}


def nerve_presentation(t: MonoidTable) -> Presentation:
    m = t.order
    gens = tuple(f"g{a}" for a in range(1, m))
    rels = []
    for a in range(1, m):
        for b in range(1, m):
            ab = t.mul(a, b)
            rels.append(((a - 1, b - 1), (ab - 1,) if ab else ()))
    return Presentation(gens, tuple(rels))


@dataclass(frozen=True)
class MonoidCheck:
    isomorphic: bool
    system: RewritingSystem
    elements: tuple[Word, ...]
    mapping: Optional[dict[Word, int]] = None


def normal_form_monoid(r: RewritingSystem, bound: int) -> Optional[tuple[Word, ...]]:
    """Elements of the presented monoid if they all have length at most ``bound``."""
    nf = normal_forms(r, bound)
    return nf.words if nf.closed else None


def _find_isomorphism(r: RewritingSystem, elements: tuple[Word, ...], t: MonoidTable) -> Optional[dict[Word, int]]:
    if len(elements) != t.order:
        return None
    rest = elements[1:]
    products = {(u, v): r.reduce(u + v) for u in elements for v in elements}
    for perm in itertools.permutations(range(1, t.order)):
        f = {(): 0, **dict(zip(rest, perm))}
        if all(f[products[(u, v)]] == t.mul(f[u], f[v]) for u in elements for v in elements):
            return f
    return None


def fundamental_monoid_check(t: MonoidTable, max_rules: int = 200, max_len: int = 16) -> MonoidCheck:
    """Compare the monoid presented by the nerve of ``t`` with ``t`` itself.

    Raises IndeterminateVerdict if completion does not finish within limits.
    """
    system = knuth_bendix(nerve_presentation(t), max_rules, max_len)
    if not system.complete:
        raise IndeterminateVerdict("completion of the nerve presentation did not finish")
    c = census(system)
    if not c.finite:
        return MonoidCheck(False, system, ())
    elements = normal_form_monoid(system, max(system.max_lhs, 1) + t.order)
    if elements is None:
        return MonoidCheck(False, system, ())
    mapping = _find_isomorphism(system, elements, t)
    return MonoidCheck(mapping is not None, system, elements, mapping)


def inverse_name(name: str) -> str:
    return f"{name}^-1"


@dataclass(frozen=True)
class GroupCompletion:
    presentation: Presentation
    system: RewritingSystem
    census: Optional[Census]
    homomorphism: bool

    @property
    def complete(self) -> bool:
        return self.system.complete

    def classification(self) -> str:
        if self.census is None:
            return "indeterminate"
        if not self.census.finite:
            return "infinite"
        if self.census.order == 1:
            return "trivial"
        return f"finite of order {self.census.order}"


def group_completion(p: Presentation, max_rules: int = 200, max_len: int = 32) -> GroupCompletion:
    """Adjoin a formal inverse per generator and complete.

    ``homomorphism`` records that every relation of ``p`` still holds in the
    group, so ``g -> g`` defines the canonical monoid map.
    """
    k = len(p.generators)
    gens = p.generators + tuple(inverse_name(g) for g in p.generators)
    rels = list(p.relations)
    for g in range(k):
        rels.append(((g, g + k), ()))
        rels.append(((g + k, g), ()))
    group = Presentation(gens, tuple(rels))
    system = knuth_bendix(group, max_rules, max_len)
    if not system.complete:
        return GroupCompletion(group, system, None, False)
    hom = all(system.reduce(u) == system.reduce(v) for u, v in p.relations)
    return GroupCompletion(group, system, census(system), hom)
