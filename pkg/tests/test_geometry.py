import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dihomo.geometry import (
    GeometryError,
    OpenBox,
    StateSpace,
    build_state_space,
    edge_allowed,
    forbidden_rects,
    holding_intervals,
    in_xk,
    load_boxes,
    render_boxes,
    square_free,
)
from dihomo.pv import generate_random_program, parse_program


def test_holding_intervals_examples():
    p = parse_program("sem a 1\nsem b 1\nsem c 1\nproc P: P(a) V(a)\nproc Q: P(a) P(b) V(b) V(a)\n")
    h = holding_intervals(p)
    assert h[(0, "a")] == [(0, 2)]
    assert h[(1, "a")] == [(0, 4)]
    assert h[(1, "b")] == [(1, 3)]
    assert h[(0, "c")] == []


def test_forbidden_rects_examples(mutex_program, swiss_program):
    assert forbidden_rects(mutex_program) == [OpenBox((0, 0), (2, 2))]
    assert forbidden_rects(swiss_program) == [OpenBox((0, 1), (4, 3)), OpenBox((1, 0), (3, 4))]
    shared = parse_program("sem a 2\nproc P: P(a) V(a)\nproc Q: P(a) V(a)\n")
    assert forbidden_rects(shared) == []


def test_three_process_semaphore_box():
    p = parse_program("sem a 2\nproc P: P(a) V(a)\nproc Q: P(a) V(a)\nproc R: P(a) V(a)\n")
    assert forbidden_rects(p) == [OpenBox((0, 0, 0), (2, 2, 2))]
    q = parse_program("sem a 1\nproc P: P(a) V(a)\nproc Q: P(a) V(a)\nproc R:\n")
    assert forbidden_rects(q) == [OpenBox((0, 0, -1), (2, 2, 1))]


def test_build_state_space(mutex, swiss):
    assert (mutex.extents, len(mutex.boxes)) == ((2, 2), 1)
    assert (swiss.extents, len(swiss.boxes)) == ((4, 4), 2)
    empty = build_state_space(parse_program("proc P:\nproc Q:\n"))
    assert (empty.extents, empty.boxes) == ((0, 0), ())


@pytest.mark.parametrize("seed", range(30))
def test_boxes_match_lock_simulation(seed):
    # grid points at half-integer resolution: forbidden by boxes iff over capacity
    p = generate_random_program(seed, 2 + seed % 2, 2, max_len=5, max_capacity=2)
    s = build_state_space(p)
    by_boxes = oracles.boxes_forbidden(s.boxes)
    by_sim = oracles.program_forbidden(p)
    for point in itertools.product(*([Fraction(k, 2) for k in range(2 * n + 1)] for n in s.extents)):
        assert by_boxes(point) == by_sim(point), point


def test_edge_examples(mutex, swiss):
    assert not edge_allowed(swiss, (1, 1), 0)
    assert edge_allowed(mutex, (0, 0), 1)
    free = StateSpace((2, 3))
    assert all(edge_allowed(free, v, i) for v in free.vertices() for i in range(2) if v[i] < free.extents[i])


def test_square_examples(mutex, swiss):
    assert not square_free(mutex, (0, 0), 0, 1)
    assert square_free(swiss, (0, 0), 0, 1)
    assert not square_free(swiss, (1, 1), 0, 1)
    free = StateSpace((2, 2))
    assert all(square_free(free, v, 0, 1) for v in itertools.product(range(2), range(2)))


def test_out_of_range_queries(mutex):
    with pytest.raises(GeometryError):
        edge_allowed(mutex, (2, 0), 0)
    with pytest.raises(GeometryError):
        edge_allowed(mutex, (3, 0), 1)
    with pytest.raises(GeometryError):
        square_free(mutex, (0, 0), 0, 0)


def test_in_xk_examples():
    s = StateSpace((4, 4))
    assert in_xk(s, (0, 0), 0)
    assert in_xk(s, (1, 0), 1)
    assert not in_xk(s, (1, 1), 1)
    assert in_xk(s, (1, 1), 2)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.data())
def test_in_xk_monotone(extents, data):
    s = StateSpace(tuple(extents))
    v = tuple(data.draw(st.integers(0, n)) for n in extents)
    flags = [in_xk(s, v, k) for k in range(s.n + 1)]
    assert flags[-1]
    assert flags == sorted(flags)


def test_frame_edges_allowed_for_two_processes():
    for seed in range(40):
        s = build_state_space(generate_random_program(seed, 2, 3, max_len=6))
        for v in s.vertices():
            for i in range(2):
                if v[i] < s.extents[i] and v[1 - i] in (0, s.extents[1 - i]):
                    assert edge_allowed(s, v, i)


def random_space(rng: random.Random, n: int, max_extent: int = 4, max_boxes: int = 3) -> StateSpace:
    extents = tuple(rng.randint(1, max_extent) for _ in range(n))
    boxes = []
    for _ in range(rng.randint(0, max_boxes)):
        lower, upper = [], []
        full = rng.sample(range(n), rng.randint(0, n - 1)) if n > 1 else []
        for i, e in enumerate(extents):
            if i in full:
                lower.append(-1)
                upper.append(e + 1)
            else:
                l = rng.randint(0, e - 1)
                lower.append(l)
                upper.append(rng.randint(l + 1, e))
        boxes.append(OpenBox(tuple(lower), tuple(upper)))
    return StateSpace(extents, tuple(boxes))


def predicates_agree_with_sampling(s: StateSpace) -> bool:
    forbidden = oracles.boxes_forbidden(s.boxes)
    for v in s.vertices():
        for i in range(s.n):
            if v[i] < s.extents[i] and edge_allowed(s, v, i) != oracles.sample_edge_free(forbidden, v, i):
                return False
        for i, j in itertools.combinations(range(s.n), 2):
            if v[i] < s.extents[i] and v[j] < s.extents[j]:
                if square_free(s, v, i, j) != oracles.sample_square_free(forbidden, v, i, j):
                    return False
    return True


@pytest.mark.parametrize("seed", range(20))
def test_predicates_match_sampling_oracle(seed):
    rng = random.Random(seed)
    assert predicates_agree_with_sampling(random_space(rng, 1 + seed % 3))


@pytest.mark.parametrize("seed", range(10))
def test_axis_permutation_equivariance(seed):
    rng = random.Random(100 + seed)
    s = random_space(rng, 3)
    perm = rng.sample(range(3), 3)
    t = s.permute(perm)
    for v in s.vertices():
        w = tuple(v[p] for p in perm)
        for k in range(3):
            assert in_xk(s, v, k) == in_xk(t, w, k)
        for a in range(3):
            # axis a of t is axis perm[a] of s
            if v[perm[a]] < s.extents[perm[a]]:
                assert edge_allowed(t, w, a) == edge_allowed(s, v, perm[a])
            for b in range(a + 1, 3):
                if v[perm[a]] < s.extents[perm[a]] and v[perm[b]] < s.extents[perm[b]]:
                    assert square_free(t, w, a, b) == square_free(s, v, perm[a], perm[b])


def test_load_boxes(corridor):
    assert load_boxes("extents 1 1") == StateSpace((1, 1))
    assert corridor.extents == (4, 4)
    assert corridor.boxes == (OpenBox((0, 2), (2, 4)), OpenBox((1, 0), (3, 2)))
    starred = load_boxes("extents 3 2 2\nbox 1 2 * * 0 2  # comment\n")
    assert starred.boxes == (OpenBox((1, -1, 0), (2, 3, 2)),)
    assert load_boxes(render_boxes(starred)) == starred


@pytest.mark.parametrize(
    "text",
    [
        "extents 4 4\nbox 2 2 0 1\n",
        "box 0 1 0 1\n",
        "extents 4 4\nbox 0 5 0 1\n",
        "extents 4 4\nbox 0 1 0\n",
        "extents 4 4\nbox * 1 0 1\n",
        "extents 4 4\nbox * * * *\n",
        "",
        "extents 4 x\n",
        "extents 2\nfoo\n",
    ],
)
def test_load_boxes_errors(text):
    with pytest.raises(GeometryError):
        load_boxes(text)
