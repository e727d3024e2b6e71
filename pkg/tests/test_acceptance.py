"""Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible without ``-s``), so

    pytest tests/test_acceptance.py

gives a one-screen verdict.
"""

import contextlib
import json
import os
import random
import subprocess
import sys
import time
from importlib import resources

import pytest

import oracles
from dihomo.dihomotopy import dihomotopy_classes, is_serial, is_serializable
from dihomo.execution import deadlocks, reachable_set, safe_set, unreachable, unsafe_region
from dihomo.geometry import StateSpace, build_state_space
from dihomo.homology import HomologyGroup, alexander_check, build_complex, relative_homology, sub_complex_x1
from dihomo.monoid import CATALOG, cyclic_group, fundamental_monoid_check, group_completion, nerve_presentation
from dihomo.moore import check_category_laws, random_composable_triple
from dihomo.pv import generate_random_2pl, generate_random_program, is_two_phase
from dihomo.rewriting import parse_presentation
from test_geometry import predicates_agree_with_sampling, random_space


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def report(number, title):
        details = []
        start = time.perf_counter()
        try:
            yield details
        except BaseException:
            status = "FAIL"
            raise
        else:
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            note = f" ({'; '.join(details)})" if details else ""
            with capsys.disabled():
                print(f"\n[{status}] criterion {number:>2}: {title}{note} [{elapsed:.2f}s]")

    return report


def data(name):
    return resources.files("dihomo").joinpath("data", name)


def test_01_two_phase_locking_is_serializable(criterion):
    with criterion(1, "2PL programs are serializable") as notes:
        start = time.perf_counter()
        bad = []
        for seed in range(200):
            nprocs = 2 + seed % 2
            nlocks = 1 + (seed // 2) % 3
            program = generate_random_2pl(seed, nprocs, nlocks, 3)
            assert is_two_phase(program)[1]
            v = is_serializable(build_state_space(program))
            if v.indeterminate or v.serializable is not True:
                bad.append(seed)
        elapsed = time.perf_counter() - start
        notes.append(f"200 programs, {len(bad)} failures, {elapsed:.1f}s")
        assert not bad, bad
        assert elapsed < 300


def test_02_swiss_flag(criterion):
    with criterion(2, "Swiss flag matches the BFS oracles") as notes:
        from dihomo.pv import parse_program

        s = build_state_space(parse_program(data("swiss_flag.pv").read_text()))
        forbidden = oracles.boxes_forbidden(s.boxes)
        reach = oracles.reachable(s.extents, forbidden)
        safe = oracles.coreachable(s.extents, forbidden)
        assert reachable_set(s) == reach and safe_set(s) == safe
        assert deadlocks(s) == {(1, 1)}
        assert (3, 3) in unreachable(s) and (3, 3) not in reach
        assert unsafe_region(s) == reach - safe and unsafe_region(s)
        v = is_serializable(s)
        assert v.serializable is True and not v.indeterminate
        notes.append(f"unsafe={sorted(unsafe_region(s))}")


def test_03_corridor(criterion):
    with criterion(3, "corridor is not serializable") as notes:
        from dihomo.geometry import load_boxes

        s = load_boxes(data("corridor.boxes").read_text())
        assert s.extents == (4, 4)
        assert sorted((b.lower, b.upper) for b in s.boxes) == [((0, 2), (2, 4)), ((1, 0), (3, 2))]
        v = is_serializable(s)
        assert v.serializable is False and not is_serial(v.witness)
        groups = oracles.swap_classes(s.extents, oracles.boxes_forbidden(s.boxes))
        classes = dihomotopy_classes(s)
        assert len(groups) >= 3 and len(classes) == len(groups)
        assert [c.representative for c in classes] == [g[0] for g in groups]
        notes.append(f"{len(classes)} classes, witness {''.join(map(str, v.witness))}")


def test_04_alexander_duality(criterion):
    with criterion(4, "Alexander duality on 2-process programs") as notes:
        failures, ranks = [], {}
        two_phase = 0
        for seed in range(50):
            if seed % 2:
                program = generate_random_2pl(seed, 2, 1 + seed % 3, 3)
            else:
                program = generate_random_program(seed, 2, 3, max_len=8, max_capacity=2)
            a = alexander_check(build_state_space(program))
            ranks[a.h1_rank] = ranks.get(a.h1_rank, 0) + 1
            if not a.holds:
                failures.append(seed)
            if is_two_phase(program)[1]:
                two_phase += 1
                if a.h1_rank != 0 or a.h1_torsion:
                    failures.append(seed)
        notes.append(f"{two_phase} two-phase, rank histogram {dict(sorted(ranks.items()))}")
        assert not failures, failures


def test_05_disk_modulo_boundary(criterion):
    with criterion(5, "H(X, X1) of the empty square") as notes:
        for extents in [(1, 1), (2, 3), (4, 4)]:
            c = build_complex(StateSpace(extents))
            x1 = sub_complex_x1(c)
            assert relative_homology(c, x1, 1) == HomologyGroup(0)
            assert relative_homology(c, x1, 2) == HomologyGroup(1)
        notes.append("H1=0, H2=Z")


def test_06_moore_category(criterion):
    with criterion(6, "Moore path category laws") as notes:
        rng = random.Random(2024)
        failures = {}
        for k in range(1000):
            p, q, r = random_composable_triple(rng, 1 + k % 3, directed=k % 2 == 1)
            for law, ok in check_category_laws(p, q, r).items():
                failures[law] = failures.get(law, 0) + (not ok)
        notes.append("1000 triples, failures " + ", ".join(f"{k}={v}" for k, v in sorted(failures.items())))
        assert not any(failures.values())


def test_07_fundamental_monoid(criterion):
    with criterion(7, "nerve presentations recover the catalog") as notes:
        start = time.perf_counter()
        for name, make in CATALOG.items():
            assert fundamental_monoid_check(make()).isomorphic, name
        elapsed = time.perf_counter() - start
        notes.append(f"{len(CATALOG)} monoids")
        assert elapsed < 10


def test_08_group_completion(criterion):
    with criterion(8, "group completion examples") as notes:
        cases = [
            (parse_presentation("gens x"), "infinite"),
            (parse_presentation("gens x\nrel x x = x"), "trivial"),
            (nerve_presentation(cyclic_group(3)), "finite of order 3"),
        ]
        for p, expected in cases:
            g = group_completion(p)
            assert g.system.status == "complete"
            assert g.classification() == expected
            notes.append(expected)


def test_09_cli_determinism(criterion, tmp_path):
    with criterion(9, "CLI JSON is byte-identical across runs") as notes:
        commands = [
            ["analyze", str(data("swiss_flag.pv"))],
            ["classes", str(data("corridor.boxes"))],
            ["serializable", str(data("corridor.boxes"))],
            ["check-2pl", str(data("two_phase.pv"))],
            ["homology", str(data("two_holes.boxes"))],
            ["monoid", "check-bm"],
            ["monoid", "group-complete", str(data("naturals.pres"))],
            ["moore", "selftest", "--trials", "100", "--seed", "7"],
            ["gen-2pl", "--seed", "5", "--nprocs", "3"],
        ]
        for argv in commands:
            outputs = set()
            for run in range(3):
                env = dict(os.environ, PYTHONHASHSEED=str(run))
                proc = subprocess.run(
                    [sys.executable, "-m", "dihomo", *argv, "--json"],
                    capture_output=True,
                    env=env,
                    check=False,
                )
                assert proc.returncode in (0, 1), proc.stderr
                json.loads(proc.stdout)
                outputs.add(proc.stdout)
            assert len(outputs) == 1, argv
        notes.append(f"{len(commands)} commands x 3 processes")


def test_10_sampling_oracle(criterion):
    with criterion(10, "edge/square predicates match point sampling") as notes:
        rng = random.Random(10)
        bad = 0
        for k in range(100):
            s = random_space(rng, 1 + k % 3, max_extent=4)
            bad += not predicates_agree_with_sampling(s)
        notes.append(f"100 spaces, {bad} disagreements")
        assert bad == 0
