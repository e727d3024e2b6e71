"""PV lock programs: parsing, rendering, the two-phase test and a random 2PL generator.

A program declares counting semaphores and a list of sequential processes,
each a straight-line sequence of ``P(lock)`` (acquire) and ``V(lock)``
(release) instructions::

    sem a 1
    sem b 1
    proc P1: P(a) P(b) V(b) V(a)
    proc P2: P(b) P(a) V(a) V(b)

Process order is declaration order, which fixes the coordinate order of the
geometric state space built downstream.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

NAME_RE = r"[A-Za-z_][A-Za-z0-9_]*"
_NAME = re.compile(NAME_RE)
_INT = re.compile(r"-?[0-9]+")
_OP = re.compile(r"([PV])\(\s*(" + NAME_RE + r")\s*\)")


class PVError(ValueError):
    """Invalid PV source or program.

    ``kind`` is one of ``syntax``, ``undeclared-lock``, ``capacity``,
    ``duplicate``, ``unmatched-release``, ``reentrant-acquire`` and
    ``unreleased-lock``.
    """

    def __init__(self, kind: str, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.kind = kind
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}{kind}: {message}")


@dataclass(frozen=True)
class Instruction:
    op: str  # "P" or "V"
    lock: str

    def __str__(self) -> str:
        return f"{self.op}({self.lock})"


@dataclass(frozen=True)
class Process:
    name: str
    instructions: tuple[Instruction, ...] = ()

    def __len__(self) -> int:
        return len(self.instructions)


@dataclass(frozen=True)
class Program:
    semaphores: dict[str, int] = field(default_factory=dict)
    processes: tuple[Process, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "processes", tuple(self.processes))
        check_program(self)

    @property
    def n(self) -> int:
        return len(self.processes)

    @property
    def extents(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.processes)

    def __hash__(self):
        return hash((tuple(self.semaphores.items()), self.processes))


Locator = Callable[[int], tuple[Optional[int], Optional[int]]]


def _no_location(_: int) -> tuple[None, None]:
    return None, None


def check_process(
    instructions: Iterable[Instruction],
    semaphores: dict[str, int],
    locate: Locator = _no_location,
) -> None:
    """Raise PVError if the instruction list breaks any lock discipline rule."""
    held: set[str] = set()
    last_acquire: dict[str, int] = {}
    for k, ins in enumerate(instructions):
        if ins.lock not in semaphores:
            raise PVError("undeclared-lock", f"lock {ins.lock!r} is not declared", *locate(k))
        if ins.op == "P":
            if ins.lock in held:
                raise PVError("reentrant-acquire", f"lock {ins.lock!r} is already held", *locate(k))
            held.add(ins.lock)
            last_acquire[ins.lock] = k
        elif ins.op == "V":
            if ins.lock not in held:
                raise PVError("unmatched-release", f"V({ins.lock}) without a matching P({ins.lock})", *locate(k))
            held.remove(ins.lock)
        else:
            raise PVError("syntax", f"unknown operation {ins.op!r}", *locate(k))
    if held:
        lock = min(held, key=last_acquire.__getitem__)
        raise PVError("unreleased-lock", f"lock {lock!r} is never released", *locate(last_acquire[lock]))


def check_program(p: Program) -> None:
    for name, cap in p.semaphores.items():
        if not _NAME.fullmatch(name):
            raise PVError("syntax", f"bad lock name {name!r}")
        if not isinstance(cap, int) or cap < 1:
            raise PVError("capacity", f"capacity of {name!r} must be >= 1, got {cap!r}")
    names = [proc.name for proc in p.processes]
    if len(set(names)) != len(names):
        raise PVError("duplicate", "duplicate process name")
    for proc in p.processes:
        check_process(proc.instructions, p.semaphores)


def parse_program(source: str) -> Program:
    semaphores: dict[str, int] = {}
    procs: list[tuple[str, list[Instruction], list[tuple[int, int]]]] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        keyword = stripped.split(None, 1)[0]
        if keyword == "sem":
            parts = stripped.split()
            if len(parts) != 3 or not _NAME.fullmatch(parts[1]) or not _INT.fullmatch(parts[2]):
                raise PVError("syntax", "expected 'sem NAME INT'", lineno, indent + 1)
            name, cap = parts[1], int(parts[2])
            col = line.index(parts[1], indent + 3) + 1
            if name in semaphores:
                raise PVError("duplicate", f"lock {name!r} declared twice", lineno, col)
            if cap < 1:
                raise PVError("capacity", f"capacity of {name!r} must be >= 1, got {cap}", lineno, line.rindex(parts[2]) + 1)
            semaphores[name] = cap
        elif keyword == "proc":
            m = re.match(r"\s*proc\s+(" + NAME_RE + r")\s*:", line)
            if not m:
                raise PVError("syntax", "expected 'proc NAME:'", lineno, indent + 1)
            name = m.group(1)
            if any(name == other for other, _, _ in procs):
                raise PVError("duplicate", f"process {name!r} declared twice", lineno, m.start(1) + 1)
            ops, locs = [], []
            pos = m.end()
            while True:
                while pos < len(line) and (line[pos].isspace() or line[pos] == ";"):
                    pos += 1
                if pos >= len(line):
                    break
                om = _OP.match(line, pos)
                if not om:
                    raise PVError("syntax", "expected P(NAME) or V(NAME)", lineno, pos + 1)
                ops.append(Instruction(om.group(1), om.group(2)))
                locs.append((lineno, om.start(2) + 1))
                pos = om.end()
            procs.append((name, ops, locs))
        else:
            raise PVError("syntax", f"unexpected {keyword!r}", lineno, indent + 1)

    for name, ops, locs in procs:
        check_process(ops, semaphores, locs.__getitem__)
    return Program(semaphores, tuple(Process(name, tuple(ops)) for name, ops, _ in procs))


def render_program(p: Program) -> str:
    """Canonical text form; ``parse_program(render_program(p)) == p``."""
    lines = [f"sem {name} {cap}" for name, cap in p.semaphores.items()]
    for proc in p.processes:
        body = " ".join(str(ins) for ins in proc.instructions)
        lines.append(f"proc {proc.name}: {body}".rstrip())
    return "\n".join(lines) + "\n"


def is_two_phase(p: Program) -> tuple[dict[int, bool], bool]:
    """Per-process two-phase flags (0-based process index) and their conjunction."""
    flags = {}
    for k, proc in enumerate(p.processes):
        acquires = [j for j, ins in enumerate(proc.instructions) if ins.op == "P"]
        releases = [j for j, ins in enumerate(proc.instructions) if ins.op == "V"]
        flags[k] = not acquires or not releases or max(acquires) < min(releases)
    return flags, all(flags.values())


def lock_names(nlocks: int) -> list[str]:
    return [f"l{k}" for k in range(nlocks)]


def generate_random_2pl(seed: int, nprocs: int, nlocks: int, max_locks_per_proc: int) -> Program:
    """A random two-phase program over ``nlocks`` mutexes.

    Each process takes a uniformly sized random subset of the locks, acquires
    them in one random order and releases them in an independent random order.
    """
    if nprocs < 1 or nlocks < 1 or max_locks_per_proc < 0:
        raise ValueError("need nprocs >= 1, nlocks >= 1, max_locks_per_proc >= 0")
    rng = random.Random(seed)
    locks = lock_names(nlocks)
    procs = []
    for k in range(nprocs):
        size = rng.randint(0, min(max_locks_per_proc, nlocks))
        held = rng.sample(locks, size)
        released = rng.sample(held, size)
        body = [Instruction("P", a) for a in held] + [Instruction("V", a) for a in released]
        procs.append(Process(f"T{k + 1}", tuple(body)))
    return Program({a: 1 for a in locks}, tuple(procs))


def generate_random_program(
    seed: int,
    nprocs: int,
    nlocks: int,
    max_len: int = 8,
    max_capacity: int = 1,
) -> Program:
    """A random valid program, not necessarily two-phase.

    Each process is a random walk over acquire/release moves; whatever is still
    held at the end is released in random order.
    """
    if nprocs < 1 or nlocks < 1 or max_len < 0 or max_capacity < 1:
        raise ValueError("bad generator arguments")
    rng = random.Random(seed)
    locks = lock_names(nlocks)
    procs = []
    for k in range(nprocs):
        steps = rng.randint(0, max_len)
        held: list[str] = []
        body: list[Instruction] = []
        for _ in range(steps):
            free = [a for a in locks if a not in held]
            if held and (not free or rng.random() < 0.5):
                a = rng.choice(held)
                held.remove(a)
                body.append(Instruction("V", a))
            else:
                a = rng.choice(free)
                held.append(a)
                body.append(Instruction("P", a))
        rng.shuffle(held)
        body.extend(Instruction("V", a) for a in held)
        procs.append(Process(f"T{k + 1}", tuple(body)))
    caps = {a: rng.randint(1, max_capacity) for a in locks}
    return Program(caps, tuple(procs))
