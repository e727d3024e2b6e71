"""JSON reports.

Every report is a dict of strings, integers, booleans, lists and dicts only,
tagged with ``"schema": "dihomo-report/1"``. Vertex lists are sorted
lexicographically; class lists are sorted by representative.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from . import dihomotopy, execution, homology
from .dihomotopy import Caps, word_str
from .geometry import StateSpace, render_boxes
from .pv import Program, is_two_phase, render_program

SCHEMA = "dihomo-report/1"


def _vertices(vs) -> list[list[int]]:
    return [list(v) for v in sorted(vs)]


def base_report(command: str, space: Optional[StateSpace] = None, program: Optional[Program] = None) -> dict:
    report: dict[str, Any] = {"schema": SCHEMA, "command": command}
    if program is not None:
        report["program"] = render_program(program)
        report["processes"] = [p.name for p in program.processes]
    if space is not None:
        report["boxes"] = render_boxes(space)
        report["extents"] = list(space.extents)
    return report


def analyze_report(space: StateSpace, program: Optional[Program] = None) -> dict:
    r = base_report("analyze", space, program)
    reach = execution.reachable_set(space)
    safe = execution.safe_set(space)
    r["analysis"] = {
        "reachable_count": len(reach),
        "safe_count": len(safe),
        "deadlocks": _vertices(execution.deadlocks(space)),
        "unreachable": _vertices(execution.unreachable(space)),
        "unsafe": _vertices(reach - safe),
        "complete_schedule_exists": space.bottom in safe,
    }
    return r


def _caps(caps: Caps) -> dict:
    return {"max_paths": caps.max_paths, "max_class_size": caps.max_class_size}


def classes_report(space: StateSpace, caps: Caps, method: str, program: Optional[Program] = None) -> dict:
    r = base_report("classes", space, program)
    r["caps"] = _caps(caps)
    r["method"] = method
    try:
        classes = dihomotopy.dihomotopy_classes(space, caps.max_paths, caps.max_class_size, method)
    except dihomotopy.CapExceeded as exc:
        r["indeterminate"] = True
        r["reason"] = str(exc)
        return r
    r["census"] = dihomotopy.census(classes)
    r["indeterminate"] = any(c.truncated for c in classes)
    return r


def _verdict_fields(verdict: dihomotopy.Verdict) -> dict:
    out: dict[str, Any] = {"indeterminate": verdict.indeterminate}
    if verdict.indeterminate:
        out["reason"] = verdict.reason
    else:
        out["serializable"] = verdict.serializable
        out["class_count"] = verdict.classes
        out["witness"] = word_str(verdict.witness) if verdict.witness is not None else None
    return out


def serializable_report(space: StateSpace, caps: Caps, method: str, program: Optional[Program] = None) -> dict:
    r = base_report("serializable", space, program)
    r["caps"] = _caps(caps)
    r["method"] = method
    r.update(_verdict_fields(dihomotopy.is_serializable(space, caps, method)))
    return r


def check_2pl_report(program: Program, space: StateSpace, caps: Caps, method: str) -> dict:
    r = base_report("check-2pl", space, program)
    flags, overall = is_two_phase(program)
    r["two_phase"] = {program.processes[k].name: flag for k, flag in flags.items()}
    r["two_phase_overall"] = overall
    r["caps"] = _caps(caps)
    r["method"] = method
    r.update(_verdict_fields(dihomotopy.is_serializable(space, caps, method)))
    # the theorem is violated only by a two-phase program that is not serializable
    r["theorem_holds"] = None if r["indeterminate"] else (not overall or bool(r["serializable"]))
    return r


def _group(g: homology.HomologyGroup) -> dict:
    return {"betti": g.betti, "torsion": list(g.torsion)}


def homology_report(space: StateSpace, program: Optional[Program] = None) -> dict:
    r = base_report("homology", space, program)
    c = homology.build_complex(space)
    x1 = homology.sub_complex_x1(c)
    r["cells"] = [c.count(d) for d in range(space.n + 1)]
    r["absolute"] = [_group(homology.homology(c, d)) for d in range(space.n + 1)]
    r["relative_x1"] = [_group(homology.relative_homology(c, x1, d)) for d in range(space.n + 1)]
    r["forbidden_components"] = homology.forbidden_components(space)
    if space.n == 2:
        a = homology.alexander_check(space)
        r["alexander"] = {"holds": a.holds, "h1_rank": a.h1_rank, "expected_rank": a.expected_rank}
    return r


def check_exact(value: Any) -> None:
    """Raise TypeError if ``value`` holds anything but exact JSON data."""
    if value is None or isinstance(value, (bool, int, str)):
        return
    if isinstance(value, list):
        for x in value:
            check_exact(x)
    elif isinstance(value, dict):
        for k, x in value.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string key {k!r}")
            check_exact(x)
    else:
        raise TypeError(f"{type(value).__name__} is not allowed in reports")


def emit_json(report: dict) -> str:
    check_exact(report)
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
