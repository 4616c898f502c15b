"""Command-line interface.

One binary with subcommands sharing the definition-file formats.  Exit codes:
0 all checks passed / computation succeeded, 1 a verified mathematical
violation was found (findings listed), 2 malformed input (parse, shape, or
certified-invariant error).  Reports are emitted as human-readable lines by
default or as deterministic JSON with --json; --out writes to a file instead
of stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import cohomology as coh
from . import formats
from .errors import (
    InvariantError,
    MalformedP,
    NotCrossedHom,
    NotNijenhuis,
    ParseError,
    SearchSpaceTooLarge,
    ShapeError,
    ToolkitError,
)
from .liealg import (
    Setup,
    check_action,
    check_crossed_hom,
    check_lie_algebra,
    solve_crossed_homs_grid,
    twist_iso_check,
)
from .linalg import parse_rational
from .report import Finding, Report
from .rinehart import (
    LeibnizPair,
    LieRinehart,
    adjoint_rep_gl,
    check_leibniz_pair,
    check_lie_rinehart,
    check_module_axiom_window,
    check_weak_compat_window,
    check_weak_rep,
    natural_rep_gl,
    shen_larsson_action,
    trivial_rep,
    vtensor_window_basis,
)
from .witt import Window, verify_witt_crossed_hom, witt_window_basis

REPS = {"trivial": trivial_rep, "natural": natural_rep_gl, "adjoint": adjoint_rep_gl}

_INPUT_ERRORS = (ParseError, ShapeError, InvariantError, MalformedP, SearchSpaceTooLarge, OSError)


def _parse_element(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_rational(c) for c in text.split(","))
    except ValueError as exc:
        raise ParseError(f"--element: {exc}") from None


def _parse_grid(text: str) -> list[Fraction]:
    try:
        return [parse_rational(c) for c in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"--grid: {exc}") from None


def _load_setup(path: str) -> Setup:
    obj = formats.load_file(path)
    if not isinstance(obj, Setup):
        raise ParseError(f"{path}: expected a setup file")
    return obj


def _require_sound_setup(report: Report, s: Setup) -> bool:
    """Structural checks shared by the setup-based subcommands."""
    report.add_findings(check_lie_algebra(s.g))
    report.add_findings(check_lie_algebra(s.h))
    report.add_findings(check_action(s.rho))
    return not report.findings


def cmd_check_lie(args, report: Report):
    obj = formats.load_file(args.input)
    if not hasattr(obj, "basis_names") or not hasattr(obj, "bracket_basis"):
        raise ParseError(f"{args.input}: expected a Lie algebra file")
    report.add_findings(check_lie_algebra(obj))
    report.payload["dim"] = obj.dim


def cmd_check_action(args, report: Report):
    s = _load_setup(args.input)
    _require_sound_setup(report, s)


def cmd_check_crossed_hom(args, report: Report):
    s = _load_setup(args.input)
    if _require_sound_setup(report, s):
        report.add_findings(check_crossed_hom(s))
        report.payload["twist_map_is_homomorphism"] = twist_iso_check(s)


def cmd_check_rinehart(args, report: Report):
    obj = formats.load_file(args.input)
    if not isinstance(obj, tuple) or not isinstance(obj[0], LieRinehart):
        raise ParseError(f"{args.input}: expected a lie_rinehart bundle")
    lr, module_block = obj
    report.add_findings(check_lie_rinehart(lr))
    if module_block:
        mod, rho = formats.module_from_dict(
            lr.algebra, lr.lie.basis_names, module_block, f"{args.input}.module"
        )
        strict = bool(module_block.get("strict"))
        report.add_findings(check_weak_rep(lr, mod, rho, strict=strict))
    report.payload["dim_A"] = lr.algebra.dim
    report.payload["dim_L"] = lr.lie.dim


def cmd_check_leibniz(args, report: Report):
    obj = formats.load_file(args.input)
    if not isinstance(obj, LeibnizPair):
        raise ParseError(f"{args.input}: expected a leibniz_pair file")
    report.add_findings(check_leibniz_pair(obj))
    report.payload["dim_A"] = obj.algebra.dim
    report.payload["dim_S"] = obj.lie.dim


def cmd_cohomology(args, report: Report):
    s = _load_setup(args.input)
    if not _require_sound_setup(report, s):
        return
    report.add_findings(check_crossed_hom(s))
    if report.findings:
        return
    rep = coh.cohomology_dims(s, args.max_degree)
    report.payload.update(rep.to_json())


def cmd_mc_residual(args, report: Report):
    s = _load_setup(args.input)
    if not _require_sound_setup(report, s):
        return
    res = coh.mc_residual(s)
    entries = []
    for key in sorted(res.values):
        entries.append(
            {
                "site": [s.g.basis_names[t] for t in key],
                "value": [str(c) for c in res.values[key]],
            }
        )
    report.payload["residual"] = entries
    if entries:
        report.add_findings(
            [
                Finding("maurer-cartan", tuple(e["site"]), res.values[k])
                for e, k in zip(entries, sorted(res.values))
            ]
        )


def cmd_nijenhuis(args, report: Report):
    s = _load_setup(args.input)
    if not _require_sound_setup(report, s):
        return
    bad = check_crossed_hom(s)
    if bad:
        report.add_findings(bad)
        return
    if args.element is not None:
        x = _parse_element(args.element)
        findings = coh.check_nijenhuis(s, x)
        report.add_findings(findings)
        conditions = {}
        for rule in ("Nij1", "Nij2", "Nij3", "Nij4"):
            first = next((f for f in findings if f.rule == rule), None)
            conditions[rule] = (
                {"status": "pass"}
                if first is None
                else {"status": "fail", "first_counterexample": list(first.site)}
            )
        report.payload["conditions"] = conditions
    elif args.grid is not None:
        grid = _parse_grid(args.grid)
        passing = coh.nijenhuis_grid(s, grid)
        report.payload["passing"] = [[str(c) for c in x] for x in passing]
        report.payload["count"] = len(passing)
    else:
        raise ParseError("nijenhuis requires --element or --grid")


def cmd_deform(args, report: Report):
    s = _load_setup(args.input)
    if not _require_sound_setup(report, s):
        return
    bad = check_crossed_hom(s)
    if bad:
        report.add_findings(bad)
        return
    if args.element is None:
        raise ParseError("deform requires --element (the Nijenhuis witness)")
    x = _parse_element(args.element)
    nij = coh.check_nijenhuis(s, x)
    if nij:
        report.add_findings(nij)
        return
    frk = coh.trivial_deformation_generator(s, x)
    report.payload["generator"] = frk.render_rows()
    report.add_findings(coh.check_linear_deformation(s, frk))


def cmd_witt_verify(args, report: Report):
    p = q = None
    if args.family == "pq":
        q = parse_rational(args.q) if args.q is not None else Fraction(0)
        if args.p_file is not None:
            p = formats.twisting_polynomials_from_file(args.p_file, args.n)
        else:
            from .witt import LaurentPoly

            p = [LaurentPoly.zero(args.n) for _ in range(args.n)]
    findings = verify_witt_crossed_hom(args.n, args.family, Window(args.window), p=p, q=q)
    report.add_findings(findings)
    report.payload["n"] = args.n
    report.payload["family"] = args.family
    report.payload["window"] = args.window


def cmd_shen_larsson(args, report: Report):
    theta = REPS[args.rep](args.n)
    action = shen_larsson_action(theta)
    actors = witt_window_basis(args.n, args.window)
    module = vtensor_window_basis(theta, args.n, args.window)
    if args.check:
        report.add_findings(
            check_module_axiom_window(action, args.n, Window(args.window), module)
        )
        report.add_findings(
            check_weak_compat_window(action, args.n, Window(args.window), module)
        )
    entries = []
    for w in actors:
        for t in module:
            image = action(w, t)
            result = {}
            for (pidx, r), c in image.sorted_terms():
                key = f"v{pidx + 1} (x) x^(" + ",".join(str(e) for e in r) + ")"
                result[key] = str(c)
            entries.append({"actor": str(w), "on": str(t), "result": result})
    report.payload["rep"] = args.rep
    report.payload["entries"] = entries


def cmd_solve_grid(args, report: Report):
    s = _load_setup(args.input)
    if not _require_sound_setup(report, s):
        return
    grid = _parse_grid(args.grid)
    sols = solve_crossed_homs_grid(s.g, s.h, s.rho, grid)
    report.payload["count"] = len(sols)
    report.payload["solutions"] = [H.matrix.render_rows() for H in sols]


HANDLERS = {
    "check-lie": cmd_check_lie,
    "check-action": cmd_check_action,
    "check-crossed-hom": cmd_check_crossed_hom,
    "check-rinehart": cmd_check_rinehart,
    "check-leibniz": cmd_check_leibniz,
    "cohomology": cmd_cohomology,
    "mc-residual": cmd_mc_residual,
    "nijenhuis": cmd_nijenhuis,
    "deform": cmd_deform,
    "witt-verify": cmd_witt_verify,
    "shen-larsson": cmd_shen_larsson,
    "solve-grid": cmd_solve_grid,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosshom",
        description="verify and compute with crossed homomorphisms between Lie algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="definition file (JSON)")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--out", help="write the report to this path instead of stdout")

    common(sub.add_parser("check-lie", help="Jacobi identity of an algebra file"))
    common(sub.add_parser("check-action", help="derivation + homomorphism laws of a setup's action"))
    common(sub.add_parser("check-crossed-hom", help="the crossed-homomorphism identity of a setup"))
    common(sub.add_parser("check-rinehart", help="Lie-Rinehart axioms of a bundle file"))
    common(sub.add_parser("check-leibniz", help="Leibniz-pair axioms of a pair file"))

    p = sub.add_parser("cohomology", help="cocycle/coboundary/cohomology dimensions")
    common(p)
    p.add_argument("--max-degree", type=int, default=2)

    common(sub.add_parser("mc-residual", help="Maurer-Cartan residual of the setup's H"))

    p = sub.add_parser("nijenhuis", help="Nijenhuis conditions at an element or over a grid")
    common(p)
    p.add_argument("--element", help="comma-separated rational coordinates in g")
    p.add_argument("--grid", help="comma-separated rational grid values")

    p = sub.add_parser("deform", help="trivial linear deformation from a Nijenhuis element")
    common(p)
    p.add_argument("--element", help="comma-separated rational coordinates in g")

    p = sub.add_parser("witt-verify", help="windowed crossed-homomorphism verification")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", choices=["full", "sdiv", "ham", "pq"], required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--p-file", help="twisting polynomials (family pq)")
    p.add_argument("--q", help="twisting scalar (family pq)")

    p = sub.add_parser("shen-larsson", help="emit the tensor-module action table")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rep", choices=sorted(REPS), required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--check", action="store_true", help="also verify the module law on the window")

    p = sub.add_parser("solve-grid", help="enumerate crossed homomorphisms over a grid")
    common(p)
    p.add_argument("--grid", required=True, help="comma-separated rational grid values")
    return parser


def render_report(report: Report, as_json: bool) -> str:
    if as_json:
        return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"
    return "\n".join(report.human_lines()) + "\n"


def _emit(text: str, out_path: str | None):
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = Report(command=args.command)
    try:
        HANDLERS[args.command](args, report)
    except _INPUT_ERRORS as exc:
        report.status = "error"
        report.error = {"type": type(exc).__name__, "message": str(exc)}
        _emit(render_report(report, args.json), args.out)
        return 2
    except (NotCrossedHom, NotNijenhuis) as exc:
        # precondition violations are verified mathematical findings
        report.status = "fail"
        report.error = {"type": type(exc).__name__, "message": str(exc)}
        _emit(render_report(report, args.json), args.out)
        return 1
    except ToolkitError as exc:
        report.status = "error"
        report.error = {"type": type(exc).__name__, "message": str(exc)}
        _emit(render_report(report, args.json), args.out)
        return 2
    _emit(render_report(report, args.json), args.out)
    return 0 if report.status == "pass" else 1


if __name__ == "__main__":
    raise SystemExit(main())
