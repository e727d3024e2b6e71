import json
from importlib import resources

import pytest

from dihomo.cli import run
from dihomo.geometry import load_boxes, render_boxes
from dihomo.pv import is_two_phase, parse_program


def path(name):
    return str(resources.files("dihomo").joinpath("data", name))


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--json")
    return code, json.loads(out)


def test_serializable_mutex(capsys):
    code, r = call_json(capsys, "serializable", path("central_mutex.pv"))
    assert code == 0
    assert r["serializable"] is True and r["witness"] is None
    assert r["schema"] == "dihomo-report/1"


def test_serializable_corridor(capsys):
    code, out, _ = call(capsys, "serializable", path("corridor.boxes"))
    assert code == 1
    assert "witness: 12211122" in out
    code, r = call_json(capsys, "serializable", path("corridor.boxes"))
    assert r["serializable"] is False and r["witness"] == "12211122"


def test_check_2pl_swiss(capsys):
    code, r = call_json(capsys, "check-2pl", path("swiss_flag.pv"))
    assert code == 0
    assert r["two_phase_overall"] is True and r["theorem_holds"] is True
    assert set(r["two_phase"].values()) == {True}


def test_check_2pl_not_two_phase(capsys, tmp_path):
    f = tmp_path / "p.pv"
    f.write_text("sem a 1\nsem b 1\nproc T1: P(a) V(a) P(b) V(b)\nproc T2: P(b) V(b)\n")
    code, r = call_json(capsys, "check-2pl", str(f))
    assert code == 1
    assert r["two_phase"] == {"T1": False, "T2": True}


def test_check_2pl_needs_program(capsys):
    code, _, err = call(capsys, "check-2pl", path("corridor.boxes"))
    assert code == 2 and "PV program" in err


def test_analyze_swiss(capsys):
    code, r = call_json(capsys, "analyze", path("swiss_flag.pv"))
    assert code == 0
    assert r["analysis"]["deadlocks"] == [[1, 1]]
    assert r["analysis"]["unreachable"] == [[3, 3]]
    assert r["analysis"]["unsafe"] == [[1, 1]]


def test_empty_program(capsys, tmp_path):
    f = tmp_path / "empty.pv"
    f.write_text("")
    code, r = call_json(capsys, "analyze", str(f))
    assert code == 0
    assert r["analysis"]["deadlocks"] == [] and r["extents"] == []


def test_classes_and_caps(capsys, monkeypatch):
    code, r = call_json(capsys, "classes", path("corridor.boxes"))
    assert code == 0 and r["census"]["count"] == 3
    code, r = call_json(capsys, "classes", path("corridor.boxes"), "--max-paths", "1")
    assert code == 3 and r["indeterminate"] is True and "census" not in r
    code, r = call_json(capsys, "serializable", path("corridor.boxes"), "--max-class-size", "2")
    assert code == 3 and r["indeterminate"] is True and "serializable" not in r

    monkeypatch.setenv("DIHOMO_MAX_PATHS", "1")
    code, r = call_json(capsys, "classes", path("corridor.boxes"))
    assert code == 3 and r["caps"]["max_paths"] == 1
    code, r = call_json(capsys, "classes", path("corridor.boxes"), "--max-paths", "1000")
    assert code == 0 and r["caps"]["max_paths"] == 1000


def test_methods_agree(capsys):
    _, a = call_json(capsys, "classes", path("swiss_flag.pv"), "--method", "enumerate")
    _, b = call_json(capsys, "classes", path("swiss_flag.pv"), "--method", "sweep")
    assert a["census"] == b["census"]


def test_homology(capsys):
    code, r = call_json(capsys, "homology", path("two_holes.boxes"))
    assert code == 0
    assert r["absolute"][1] == {"betti": 2, "torsion": []}
    assert r["relative_x1"][1]["betti"] == 1
    assert r["alexander"]["holds"] is True
    code, out, _ = call(capsys, "homology", path("two_holes.boxes"))
    assert "H1(X) betti=2" in out


def test_monoid_commands(capsys):
    code, r = call_json(capsys, "monoid", "check-bm")
    assert code == 0
    assert {m["status"] for m in r["monoids"].values()} == {"isomorphic"}
    code, r = call_json(capsys, "monoid", "check-bm", path("z3.table"))
    assert code == 0
    code, _, _ = call(capsys, "monoid", "check-bm", "--catalog", "nope")
    assert code == 2
    code, r = call_json(capsys, "monoid", "group-complete", path("naturals.pres"))
    assert code == 0 and r["classification"] == "infinite" and r["status"] == "complete"
    code, r = call_json(capsys, "monoid", "group-complete", path("z3.table"))
    assert r["order"] == 3


def test_moore_selftest(capsys):
    code, r = call_json(capsys, "moore", "selftest", "--trials", "50")
    assert code == 0 and not any(r["failures"].values())


def test_gen_2pl_round_trip(capsys, tmp_path):
    code, out, _ = call(capsys, "gen-2pl", "--seed", "4", "--nprocs", "3", "--nlocks", "2")
    assert code == 0
    program = parse_program(out)
    assert is_two_phase(program)[1]
    f = tmp_path / "g.pv"
    f.write_text(out)
    assert call(capsys, "check-2pl", str(f))[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["analyze"],
        ["analyze", "x.pv", "--bogus"],
        ["analyze", "/nonexistent/file.pv"],
        ["serializable", "x.pv", "--format", "xml"],
        ["monoid"],
        ["gen-2pl", "--nprocs", "0"],
    ],
)
def test_input_errors(capsys, argv):
    assert run(argv) == 2


def test_bad_program_reports_position(capsys, tmp_path):
    f = tmp_path / "bad.pv"
    f.write_text("sem a 1\nproc T1: P(b)\n")
    code, _, err = call(capsys, "analyze", str(f))
    assert code == 2 and "line 2" in err


def test_bad_boxes(capsys, tmp_path):
    f = tmp_path / "bad.boxes"
    f.write_text("extents 4 4\nbox 2 2 0 4\n")
    assert call(capsys, "analyze", str(f))[0] == 2


def test_boxes_echo_round_trips(capsys):
    _, r = call_json(capsys, "analyze", path("corridor.boxes"))
    s = load_boxes(r["boxes"])
    assert s.extents == (4, 4) and len(s.boxes) == 2
    assert render_boxes(s) == r["boxes"]


COMMANDS = [
    ["analyze", path("swiss_flag.pv")],
    ["classes", path("corridor.boxes")],
    ["serializable", path("swiss_flag.pv")],
    ["check-2pl", path("two_phase.pv")],
    ["homology", path("swiss_flag.pv")],
    ["monoid", "check-bm"],
    ["monoid", "group-complete", path("z3.table")],
    ["moore", "selftest", "--trials", "30", "--seed", "9"],
    ["gen-2pl", "--seed", "11"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]).rsplit("/", 1)[-1])
def test_json_is_deterministic(capsys, argv):
    outputs = {call(capsys, *argv, "--json")[1] for _ in range(3)}
    assert len(outputs) == 1
    r = json.loads(outputs.pop())
    assert json.loads(json.dumps(r, sort_keys=True)) == r
