"""Monoid presentations and shortlex Knuth-Bendix completion.

Words are tuples of generator indices; generator order is declaration order
and words are compared shortlex (length first, then lexicographically).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Word = tuple[int, ...]
EMPTY = "1"


def shortlex(w: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return len(w), tuple(w)


def _contains(word: Word, factor: Word) -> bool:
    k = len(factor)
    return any(word[i:i + k] == factor for i in range(len(word) - k + 1))


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[Word, Word], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple((tuple(u), tuple(v)) for u, v in self.relations))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        for name in self.generators:
            if not name or name == EMPTY or any(ch.isspace() for ch in name):
                raise ValueError(f"bad generator name {name!r}")
        k = len(self.generators)
        for u, v in self.relations:
            if any(not 0 <= x < k for x in u + v):
                raise ValueError("relation uses an undeclared generator")

    def word(self, text: str) -> Word:
        """Parse space-separated generator names; ``1`` or blank is the empty word."""
        index = {g: i for i, g in enumerate(self.generators)}
        tokens = text.split()
        if tokens == [EMPTY]:
            return ()
        try:
            return tuple(index[t] for t in tokens)
        except KeyError as exc:
            raise ValueError(f"unknown generator {exc.args[0]!r}") from None

    def render(self, w: Sequence[int]) -> str:
        return " ".join(self.generators[x] for x in w) if w else EMPTY


def parse_presentation(source: str) -> Presentation:
    """Read ``gens x y`` followed by ``rel x y = y x`` lines; ``#`` starts a comment."""
    gens: Optional[list[str]] = None
    rels = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "gens":
            if gens is not None:
                raise ValueError(f"line {lineno}: duplicate 'gens' line")
            gens = rest.split()
        elif keyword == "rel":
            if gens is None:
                raise ValueError(f"line {lineno}: 'gens' must come first")
            if rest.count("=") != 1:
                raise ValueError(f"line {lineno}: expected 'rel LHS = RHS'")
            lhs, rhs = rest.split("=")
            rels.append((lhs, rhs))
        else:
            raise ValueError(f"line {lineno}: unexpected {keyword!r}")
    if gens is None:
        raise ValueError("missing 'gens' line")
    bare = Presentation(tuple(gens))
    return Presentation(bare.generators, tuple((bare.word(l), bare.word(r)) for l, r in rels))


def render_presentation(p: Presentation) -> str:
    lines = ["gens " + " ".join(p.generators)]
    lines += [f"rel {p.render(u)} = {p.render(v)}" for u, v in p.relations]
    return "\n".join(lines) + "\n"


def _reduce(by_last: dict[int, list[tuple[Word, Word]]], w: Iterable[int]) -> Word:
    # Left-to-right with a stack: the output prefix is always irreducible, so a
    # redex can only end at the letter just pushed.
    out: list[int] = []
    todo = list(reversed(tuple(w)))
    while todo:
        out.append(todo.pop())
        for lhs, rhs in by_last.get(out[-1], ()):
            k = len(lhs)
            if len(out) >= k and tuple(out[-k:]) == lhs:
                del out[-k:]
                todo.extend(reversed(rhs))
                break
    return tuple(out)


def _index(rules: Iterable[tuple[Word, Word]]) -> dict[int, list[tuple[Word, Word]]]:
    by_last: dict[int, list[tuple[Word, Word]]] = {}
    for lhs, rhs in rules:
        by_last.setdefault(lhs[-1], []).append((lhs, rhs))
    return by_last


@dataclass(frozen=True)
class RewritingSystem:
    generators: tuple[str, ...]
    rules: tuple[tuple[Word, Word], ...]
    complete: bool

    def __post_init__(self):
        for lhs, rhs in self.rules:
            if not shortlex(lhs) > shortlex(rhs):
                raise ValueError(f"rule {lhs} -> {rhs} does not decrease shortlex order")

    @property
    def status(self) -> str:
        return "complete" if self.complete else "incomplete"

    @property
    def max_lhs(self) -> int:
        return max((len(lhs) for lhs, _ in self.rules), default=0)

    def reduce(self, w: Iterable[int]) -> Word:
        if "_by_last" not in self.__dict__:
            object.__setattr__(self, "_by_last", _index(self.rules))
        return _reduce(self.__dict__["_by_last"], w)

    def reduce_random(self, w: Iterable[int], rng: random.Random) -> Word:
        """Rewrite a uniformly chosen redex at every step until irreducible."""
        w = tuple(w)
        while True:
            redexes = [
                (i, lhs, rhs)
                for lhs, rhs in self.rules
                for i in range(len(w) - len(lhs) + 1)
                if w[i:i + len(lhs)] == lhs
            ]
            if not redexes:
                return w
            i, lhs, rhs = rng.choice(redexes)
            w = w[:i] + rhs + w[i + len(lhs):]

    def is_irreducible(self, w: Sequence[int]) -> bool:
        return not any(_contains(tuple(w), lhs) for lhs, _ in self.rules)

    def render_rules(self) -> list[str]:
        p = Presentation(self.generators)
        return [f"{p.render(l)} -> {p.render(r)}" for l, r in self.rules]


def knuth_bendix(p: Presentation, max_rules: int = 200, max_len: int = 32, max_passes: int = 200) -> RewritingSystem:
    """Shortlex completion of ``p``.

    Returns ``complete=False`` as soon as a limit is hit; ``complete=True`` only
    after a full pass in which every critical pair resolved.
    """
    if max_rules <= 0 or max_len <= 0:
        raise ValueError("limits must be positive")
    rules: list[tuple[Word, Word]] = []
    by_last: dict[int, list[tuple[Word, Word]]] = {}
    pending: deque[tuple[Word, Word]] = deque(p.relations)

    def done(complete: bool) -> RewritingSystem:
        return RewritingSystem(p.generators, tuple(sorted(rules, key=lambda r: shortlex(r[0]))), complete)

    def settle() -> bool:
        nonlocal rules, by_last
        while pending:
            u, v = pending.popleft()
            u, v = _reduce(by_last, u), _reduce(by_last, v)
            if u == v:
                continue
            lhs, rhs = (u, v) if shortlex(u) > shortlex(v) else (v, u)
            if len(lhs) > max_len:
                return False
            kept = []
            for l, r in rules:
                if _contains(l, lhs):
                    pending.append((l, r))
                else:
                    kept.append((l, r))
            kept.append((lhs, rhs))
            by_last = _index(kept)
            rules = [(l, _reduce(by_last, r)) for l, r in kept]
            by_last = _index(rules)
            if len(rules) > max_rules:
                return False
        return True

    for _ in range(max_passes):
        if not settle():
            return done(False)
        snapshot = list(rules)
        for l1, r1 in snapshot:
            for l2, r2 in snapshot:
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        a, b = r1 + l2[k:], l1[:-k] + r2
                        if _reduce(by_last, a) != _reduce(by_last, b):
                            pending.append((a, b))
        if not pending:
            return done(True)
    return done(False)


@dataclass(frozen=True)
class NormalForms:
    words: tuple[Word, ...]
    closed: bool


def _successors(r: RewritingSystem, state: Word) -> list[tuple[int, Word]]:
    # States are the last (max_lhs - 1) letters of an irreducible word.
    k = max(r.max_lhs - 1, 0)
    out = []
    for a in range(len(r.generators)):
        w = state + (a,)
        if any(w[len(w) - len(lhs):] == lhs for lhs, _ in r.rules if len(lhs) <= len(w)):
            continue
        out.append((a, w[len(w) - k:] if k else ()))
    return out


def normal_forms(r: RewritingSystem, length_bound: int) -> NormalForms:
    """Irreducible words of length at most ``length_bound``, in shortlex order.

    ``closed`` reports whether the product ``reduce(u + v)`` of any two of them
    stays in the list; then the list is the whole monoid.
    """
    if not r.complete:
        raise ValueError("normal forms need a complete rewriting system")
    words: list[Word] = [()]
    layer: list[tuple[Word, Word]] = [((), ())]
    for _ in range(length_bound):
        nxt = []
        for w, state in layer:
            for a, new_state in _successors(r, state):
                nxt.append((w + (a,), new_state))
        nxt.sort(key=lambda x: x[0])
        words.extend(w for w, _ in nxt)
        layer = nxt
    found = set(words)
    closed = all(r.reduce(u + v) in found for u in words for v in words)
    return NormalForms(tuple(words), closed)


@dataclass(frozen=True)
class Census:
    """Size of the monoid presented by a complete system.

    When infinite, ``witness = (prefix, loop)`` with ``prefix + loop * j``
    irreducible for every ``j``.
    """

    finite: bool
    order: Optional[int] = None
    witness: Optional[tuple[Word, Word]] = None


def census(r: RewritingSystem) -> Census:
    if not r.complete:
        raise ValueError("census needs a complete rewriting system")
    on_stack: dict[Word, int] = {}
    finished: dict[Word, int] = {}
    path: list[tuple[Word, int]] = []

    # iterative DFS; finished[state] = number of irreducible words readable from state
    stack = [((), iter(_successors(r, ())))]
    on_stack[()] = 0
    while stack:
        state, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            del on_stack[state]
            finished[state] = 1 + sum(finished[s] for _, s in _successors(r, state))
            if path:
                path.pop()
            continue
        a, nxt = step
        if nxt in on_stack:
            letters = [x for _, x in path] + [a]
            start = on_stack[nxt]
            return Census(False, witness=(tuple(letters[:start]), tuple(letters[start:])))
        if nxt in finished:
            continue
        path.append((state, a))
        on_stack[nxt] = len(path)
        stack.append((nxt, iter(_successors(r, nxt))))
    return Census(True, order=finished[()])
