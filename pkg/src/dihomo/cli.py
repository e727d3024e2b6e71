"""Command-line interface.

Exit codes: 0 analysis completed, 1 property violated, 2 input error,
3 indeterminate (a cap or limit was hit).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import moore, report
from .dihomotopy import Caps
from .errors import IndeterminateVerdict
from .geometry import GeometryError, StateSpace, build_state_space, load_boxes
from .monoid import CATALOG, fundamental_monoid_check, group_completion, nerve_presentation, parse_table
from .pv import Program, PVError, generate_random_2pl, parse_program, render_program
from .rewriting import Presentation, parse_presentation

OK, VIOLATED, INPUT_ERROR, INDETERMINATE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load(args) -> tuple[StateSpace, Optional[Program]]:
    fmt = args.format or ("boxes" if args.input.endswith(".boxes") else "pv")
    text = _read(args.input)
    try:
        if fmt == "boxes":
            return load_boxes(text), None
        program = parse_program(text)
        return build_state_space(program), program
    except (PVError, GeometryError) as exc:
        raise InputError(f"{args.input}: {exc}") from None


def _caps(args) -> Caps:
    return Caps.from_env(args.max_paths, args.max_class_size)


def _fmt_vertices(vs) -> str:
    return " ".join("(" + ",".join(map(str, v)) + ")" for v in vs) or "none"


def _text(r: dict) -> str:
    """Short human-readable rendering of a report."""
    cmd = r["command"]
    lines = []
    if "extents" in r:
        lines.append(f"extents: {' '.join(map(str, r['extents']))}")
    if cmd == "analyze":
        a = r["analysis"]
        lines += [
            f"deadlocks: {_fmt_vertices(a['deadlocks'])}",
            f"unreachable: {_fmt_vertices(a['unreachable'])}",
            f"unsafe: {_fmt_vertices(a['unsafe'])}",
        ]
    elif cmd == "classes":
        if r["indeterminate"] and "census" not in r:
            lines.append(f"indeterminate: {r['reason']}")
        else:
            lines.append(f"classes: {r['census']['count']}")
            for c in r["census"]["classes"]:
                tag = "serial" if c["has_serial"] else "non-serial"
                lines.append(f"  {c['representative'] or '(empty)'}  size={c['size']}  {tag}")
    elif cmd in ("serializable", "check-2pl"):
        if cmd == "check-2pl":
            for name, flag in r["two_phase"].items():
                lines.append(f"{name}: {'two-phase' if flag else 'not two-phase'}")
            lines.append(f"two-phase: {str(r['two_phase_overall']).lower()}")
        if r["indeterminate"]:
            lines.append(f"serializable: indeterminate ({r['reason']})")
        else:
            lines.append(f"serializable: {str(r['serializable']).lower()}")
            if r["witness"] is not None:
                lines.append(f"witness: {r['witness']}")
    elif cmd == "homology":
        for d, (a, rel) in enumerate(zip(r["absolute"], r["relative_x1"])):
            lines.append(f"H{d}(X) betti={a['betti']} torsion={a['torsion']}   H{d}(X,X1) betti={rel['betti']} torsion={rel['torsion']}")
        lines.append(f"forbidden components: {r['forbidden_components']}")
        if "alexander" in r:
            lines.append(f"alexander check: {str(r['alexander']['holds']).lower()}")
    elif cmd == "monoid check-bm":
        for name, m in r["monoids"].items():
            lines.append(f"{name}: {m['status']}")
    elif cmd == "monoid group-complete":
        lines.append(f"group: {r['classification']}")
        lines += [f"  {rule}" for rule in r["rules"]]
    elif cmd == "moore selftest":
        lines.append(f"trials: {r['trials']}")
        lines += [f"{law}: {n} failures" for law, n in r["failures"].items()]
    elif cmd == "gen-2pl":
        return r["program"]
    return "\n".join(lines) + "\n"


def _emit(args, r: dict) -> None:
    sys.stdout.write(report.emit_json(r) if args.json else _text(r))


def cmd_analyze(args) -> int:
    space, program = _load(args)
    _emit(args, report.analyze_report(space, program))
    return OK


def cmd_classes(args) -> int:
    space, program = _load(args)
    r = report.classes_report(space, _caps(args), args.method or "enumerate", program)
    _emit(args, r)
    return INDETERMINATE if r["indeterminate"] else OK


def cmd_serializable(args) -> int:
    space, program = _load(args)
    r = report.serializable_report(space, _caps(args), args.method or "sweep", program)
    _emit(args, r)
    if r["indeterminate"]:
        return INDETERMINATE
    return OK if r["serializable"] else VIOLATED


def cmd_check_2pl(args) -> int:
    space, program = _load(args)
    if program is None:
        raise InputError("check-2pl needs a PV program")
    r = report.check_2pl_report(program, space, _caps(args), args.method or "sweep")
    _emit(args, r)
    if r["indeterminate"]:
        return INDETERMINATE
    return OK if r["two_phase_overall"] and r["theorem_holds"] else VIOLATED


def cmd_homology(args) -> int:
    space, program = _load(args)
    r = report.homology_report(space, program)
    _emit(args, r)
    if "alexander" in r and not r["alexander"]["holds"]:
        return VIOLATED
    return OK


def cmd_check_bm(args) -> int:
    if args.input:
        try:
            tables = {args.input: parse_table(_read(args.input))}
        except ValueError as exc:
            raise InputError(f"{args.input}: {exc}") from None
    else:
        names = [args.catalog] if args.catalog else list(CATALOG)
        unknown = [n for n in names if n not in CATALOG]
        if unknown:
            raise InputError(f"unknown catalog entry {unknown[0]!r}; choose from {', '.join(CATALOG)}")
        tables = {n: CATALOG[n]() for n in names}
    r = report.base_report("monoid check-bm")
    r["monoids"] = {}
    code = OK
    for name, t in tables.items():
        entry: dict = {"order": t.order}
        try:
            check = fundamental_monoid_check(t)
        except IndeterminateVerdict as exc:
            entry.update(status="indeterminate", reason=str(exc))
            if code == OK:
                code = INDETERMINATE
        else:
            entry["status"] = "isomorphic" if check.isomorphic else "not isomorphic"
            entry["rules"] = check.system.render_rules()
            entry["normal_forms"] = len(check.elements)
            if not check.isomorphic:
                code = VIOLATED
        r["monoids"][name] = entry
    _emit(args, r)
    return code


def cmd_group_complete(args) -> int:
    text = _read(args.input)
    try:
        first = next((ln.split()[0] for ln in text.splitlines() if ln.split() and not ln.lstrip().startswith("#")), "")
        if first == "order":
            pres: Presentation = nerve_presentation(parse_table(text))
        else:
            pres = parse_presentation(text)
    except ValueError as exc:
        raise InputError(f"{args.input}: {exc}") from None
    g = group_completion(pres)
    r = report.base_report("monoid group-complete")
    r["generators"] = list(g.presentation.generators)
    r["status"] = g.system.status
    r["rules"] = g.system.render_rules()
    r["classification"] = g.classification()
    r["homomorphism"] = g.homomorphism
    if g.census is not None:
        r["finite"] = g.census.finite
        r["order"] = g.census.order
        if g.census.witness is not None:
            prefix, loop = g.census.witness
            r["growth_witness"] = {"prefix": g.presentation.render(prefix), "loop": g.presentation.render(loop)}
    _emit(args, r)
    return OK if g.complete else INDETERMINATE


def cmd_moore_selftest(args) -> int:
    failures = moore.selftest(args.seed, args.trials)
    r = report.base_report("moore selftest")
    r.update(seed=args.seed, trials=args.trials, failures=failures)
    _emit(args, r)
    return VIOLATED if any(failures.values()) else OK


def cmd_gen_2pl(args) -> int:
    try:
        program = generate_random_2pl(args.seed, args.nprocs, args.nlocks, args.max_locks)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    r = report.base_report("gen-2pl")
    r.update(seed=args.seed, program=render_program(program))
    _emit(args, r)
    return OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a canonical JSON report")
    common.add_argument("--seed", type=int, default=0)

    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("input", help="PV program or .boxes file ('-' for stdin)")
    space.add_argument("--format", choices=["pv", "boxes"], help="input format (default: by extension)")
    space.add_argument("--max-paths", type=int, help="schedule cap (default: $DIHOMO_MAX_PATHS or 200000)")
    space.add_argument("--max-class-size", type=int, help="class cap (default: 1000000)")
    space.add_argument("--method", choices=["enumerate", "sweep"], help="how dihomotopy classes are computed")

    parser = argparse.ArgumentParser(prog="dihomo", description="Geometric analysis of lock programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_ in [
        ("analyze", cmd_analyze, "reachability, deadlocks and unsafe region"),
        ("classes", cmd_classes, "dihomotopy classes of complete schedules"),
        ("serializable", cmd_serializable, "decide serializability"),
        ("check-2pl", cmd_check_2pl, "two-phase flags and the 2PL theorem on one program"),
        ("homology", cmd_homology, "integer homology of X and (X, X1)"),
    ]:
        p = sub.add_parser(name, parents=[common, space], help=help_)
        p.set_defaults(func=func)

    monoid = sub.add_parser("monoid", help="fundamental monoid computations")
    msub = monoid.add_subparsers(dest="monoid_command", required=True)
    p = msub.add_parser("check-bm", parents=[common], help="check that the nerve presentation recovers the monoid")
    p.add_argument("input", nargs="?", help="monoid table file (default: the bundled catalog)")
    p.add_argument("--catalog", help=f"one of: {', '.join(CATALOG)}")
    p.set_defaults(func=cmd_check_bm)
    p = msub.add_parser("group-complete", parents=[common], help="group completion of a presentation or table")
    p.add_argument("input", help="presentation ('gens'/'rel' lines) or monoid table file")
    p.set_defaults(func=cmd_group_complete)

    m = sub.add_parser("moore", help="Moore path category")
    mm = m.add_subparsers(dest="moore_command", required=True)
    p = mm.add_parser("selftest", parents=[common], help="check category laws on random rational paths")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_moore_selftest)

    p = sub.add_parser("gen-2pl", parents=[common], help="print a random two-phase program")
    p.add_argument("--nprocs", type=int, default=2)
    p.add_argument("--nlocks", type=int, default=2)
    p.add_argument("--max-locks", type=int, default=2)
    p.set_defaults(func=cmd_gen_2pl)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"dihomo: error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
