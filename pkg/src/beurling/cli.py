"""Command-line interface: ``beurling <command> FILE [flags]``.

Exit codes: 0 contained (or success), 1 not contained (or a negative
answer), 2 inconclusive, 3 input error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from . import serialize as ser
from .containment import Problem, Verdict, decide
from .errors import EngineDeclined, InconclusiveError
from .families import automorphism_rigidity_scan, generate, verify_family_roundtrip
from .inner import InnerFunction, pushforward
from .moebius import classify, cycle_map
from .oracle import GridSpec, cross_validate, modulus_identity_check, sup_quotient
from .tolerances import PROFILES, Tolerances

EXIT_CONTAINED = 0
EXIT_NOT_CONTAINED = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

ORACLE_ROUTE = "oracle (uncharacterized: non-automorphism φ with singular θ2)"


class CommandResult:
    def __init__(self, code: int, doc: dict, lines: Sequence[str]):
        self.code = code
        self.doc = doc
        self.lines = list(lines)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _radii(text: str) -> tuple:
    try:
        return tuple(float(r) for r in text.split(",") if r.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radius list {text!r}") from None


def _tolerances(args) -> Tolerances:
    tol = PROFILES[args.tolerance_profile]
    return tol.with_cap(args.jet_order_cap) if args.jet_order_cap is not None else tol


def _grid(args, base: GridSpec) -> GridSpec:
    radii = args.grid_radii if args.grid_radii is not None else base.radii
    count = args.grid_angles if args.grid_angles is not None else base.angular_count
    try:
        return GridSpec(radii, count, base.exclusion_radius, base.refine_factor)
    except ValueError as e:
        raise ser.InputError(str(e), ["--grid"]) from None


def _load(args, kind: str) -> tuple[str, dict]:
    text = _read(args.file)
    return text, ser.load_document(text, kind)


def _convert(text: str, fn, *a):
    try:
        return fn(*a)
    except ser.InputError as e:
        raise ser.with_location(e, text) from None


def _oracle_problem(problem: Problem) -> Problem:
    """The quotient the verdict actually speaks about under the chosen mode."""
    t1, t2 = problem.theta1, problem.theta2
    if problem.mode == "blaschke-only":
        return Problem(InnerFunction(t1.blaschke), problem.phi, InnerFunction(t2.blaschke))
    if problem.mode == "singular-only":
        return Problem(InnerFunction(measure=t1.measure), problem.phi,
                       InnerFunction(measure=t2.measure), "split")
    return problem


def _verdict_lines(v: Verdict) -> list[str]:
    lines = [f"contained: {'yes' if v.contained else 'no'}", f"route: {v.route}"]
    for c in v.zero_checks:
        lines.append(
            f"  zero {c.point:.6g}: required {c.required}, observed {c.observed}"
            f" [{'ok' if c.ok else 'FAIL'}]"
        )
    for c in v.atom_checks:
        lines.append(
            f"  atom at angle {c.angle:.6g}: required {c.required:.6g},"
            f" available {c.available:.6g} [{'ok' if c.ok else 'FAIL'}]"
        )
    lines += [f"  note: {n}" for n in v.notes]
    return lines


def cmd_decide(args) -> CommandResult:
    text, doc = _load(args, "problem")
    problem, grid = _convert(text, ser.problem_from_doc, doc)
    grid = _grid(args, grid)
    tol = _tolerances(args)
    oracle_problem = _oracle_problem(problem)
    report = sup_quotient(oracle_problem.theta1, problem.phi, oracle_problem.theta2, grid)
    try:
        verdict = decide(problem, tol)
    except EngineDeclined:
        out = {
            "contained": None if report.inconclusive else report.bounded_consistent,
            "witness": None,
            "theorem_route": ORACLE_ROUTE,
            "oracle_cross_check": {"status": "oracle-only", "report": ser.report_to_doc(report)},
        }
        code = {True: EXIT_CONTAINED, False: EXIT_NOT_CONTAINED, None: EXIT_INCONCLUSIVE}[
            out["contained"]
        ]
        lines = [f"route: {ORACLE_ROUTE}", f"oracle: {report.flag} (sup ≈ {report.sup_estimate:.6g})"]
        return CommandResult(code, out, lines)
    cross = cross_validate(verdict, report, oracle_problem, grid, refine=args.refine)
    out = ser.verdict_to_doc(verdict)
    out["oracle_cross_check"] = {
        "status": cross.status,
        "report": ser.report_to_doc(cross.report),
        "refined": ser.report_to_doc(cross.refined),
    }
    lines = _verdict_lines(verdict) + [
        f"oracle: {report.flag} (sup ≈ {report.sup_estimate:.6g}), cross-check {cross.status}"
    ]
    return CommandResult(EXIT_CONTAINED if verdict.contained else EXIT_NOT_CONTAINED, out, lines)


def cmd_oracle(args) -> CommandResult:
    text, doc = _load(args, "problem")
    problem, grid = _convert(text, ser.problem_from_doc, doc)
    grid = _grid(args, grid)
    report = sup_quotient(problem.theta1, problem.phi, problem.theta2, grid)
    code = EXIT_CONTAINED if report.bounded_consistent else (
        EXIT_NOT_CONTAINED if report.blowup_detected else EXIT_INCONCLUSIVE)
    out = ser.report_to_doc(report)
    return CommandResult(code, out, [f"{report.flag}: sup ≈ {report.sup_estimate:.6g} "
                                     f"at {report.argmax} over {report.samples_used} samples"])


def cmd_family(args) -> CommandResult:
    tol = _tolerances(args)
    if args.rigidity_scan:
        text, doc = _load(args, "rigidity")
        theta = _convert(text, ser.inner_from_doc, doc["blaschke"], ["blaschke"])
        if theta.measure.atoms:
            raise ser.with_location(
                ser.InputError("rigidity scan needs a pure Blaschke product", ["blaschke", "atoms"]), text)
        rng = np.random.default_rng(doc.get("seed", 0))
        try:
            rep = automorphism_rigidity_scan(theta.blaschke, doc.get("trials", 20), rng, tol)
        except ValueError as e:
            raise ser.InputError(str(e), ["blaschke"]) from None
        rows = [
            {
                "permutation": list(r.permutation),
                "candidate": None if r.candidate is None else ser.moebius_to_doc(r.candidate),
                "contained": r.contained,
                "reason": r.reason,
            }
            for r in rep.rows
        ]
        out = {"rows": rows, "random_trials": rep.random_trials,
               "random_contained": rep.random_contained, "all_refuted": rep.all_refuted}
        lines = [f"{tuple(r['permutation'])}: {r['reason']}" for r in rows]
        lines.append(f"random automorphisms: {rep.random_contained}/{rep.random_trials} contained")
        lines.append("no nontrivial automorphism leaves B H^p invariant" if rep.all_refuted
                     else "a nontrivial automorphism passed")
        return CommandResult(EXIT_CONTAINED if rep.all_refuted else EXIT_NOT_CONTAINED, out, lines)

    text, doc = _load(args, "family")
    spec = _convert(text, ser.family_from_doc, doc)
    phi = generate(spec)
    verdict = verify_family_roundtrip(spec, tol=tol)
    out = {"spec": ser.family_to_doc(spec), "map": ser.selfmap_to_doc(phi),
           "contained": verdict.contained, "verdict": ser.verdict_to_doc(verdict)}
    lines = [f"kind: {spec.kind}", f"map: {phi}"] + _verdict_lines(verdict)
    return CommandResult(EXIT_CONTAINED if verdict.contained else EXIT_NOT_CONTAINED, out, lines)


def cmd_pushforward(args) -> CommandResult:
    text, doc = _load(args, "pushforward")
    mu = _convert(text, ser.measure_from_doc, doc["measure"], ["measure"])
    m = _convert(text, ser.moebius_from_doc, doc["automorphism"], ["automorphism"])
    nu = pushforward(mu, m)
    check = modulus_identity_check(mu, m, nu)
    out = {"measure": ser.measure_to_doc(nu), "modulus_identity_check": check}
    lines = [f"atom at {t:.12g}: weight {w:.12g}" for t, w in nu.atoms]
    lines.append(f"modulus identity max relative error: {check:.3g}")
    return CommandResult(EXIT_CONTAINED, out, lines)


def cmd_classify(args) -> CommandResult:
    text, doc = _load(args, "automorphism")
    m = _convert(text, ser.moebius_from_doc, doc)
    c = classify(m)
    out = ser.classification_to_doc(c)
    lines = [c.tag] + [f"  fixed point {f.point:.12g} ({f.location})" for f in c.fixed_points]
    return CommandResult(EXIT_CONTAINED, out, lines)


def cmd_cycle_map(args) -> CommandResult:
    text, doc = _load(args, "points")
    pts = ser.points_from_doc(doc)
    try:
        m = cycle_map(pts, _tolerances(args).match)
    except ValueError as e:
        raise ser.with_location(ser.InputError(str(e), ["points"]), text) from None
    out = {"map": None if m is None else ser.moebius_to_doc(m)}
    lines = ["no automorphism cycles these points"] if m is None else [f"{m}"]
    return CommandResult(EXIT_CONTAINED if m is not None else EXIT_NOT_CONTAINED, out, lines)


COMMANDS = {
    "decide": (cmd_decide, "decide containment for a problem file"),
    "family": (cmd_family, "generate a family member and verify it (or run a rigidity scan)"),
    "pushforward": (cmd_pushforward, "push an atomic measure forward under an automorphism"),
    "classify": (cmd_classify, "classify a disk automorphism"),
    "cycle-map": (cmd_cycle_map, "find the automorphism cycling given points"),
    "oracle": (cmd_oracle, "estimate sup |theta1∘phi / theta2| on a grid"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="JSON document, or - for stdin")
    common.add_argument("--grid-radii", type=_radii, default=None,
                        help="comma-separated radii in (0, 1)")
    common.add_argument("--grid-angles", type=int, default=None, help="angles per circle")
    common.add_argument("--jet-order-cap", type=int, default=None)
    common.add_argument("--tolerance-profile", choices=sorted(PROFILES), default="default")
    common.add_argument("--output", choices=("report", "document"), default="document")
    common.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True,
                        help="re-sample near the witness when the grid misses a blow-up")

    parser = argparse.ArgumentParser(prog="beurling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (fn, helptext) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.set_defaults(func=fn)
        if name == "family":
            p.add_argument("--rigidity-scan", action="store_true",
                           help="FILE holds {blaschke, trials}; scan automorphisms instead")
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; usage errors are input errors here
        return EXIT_INPUT_ERROR if e.code else 0
    if args.jet_order_cap is not None and args.jet_order_cap < 1:
        print("error: --jet-order-cap must be positive", file=stderr)
        return EXIT_INPUT_ERROR
    try:
        result = args.func(args)
    except ser.InputError as e:
        print(f"input error: {e.describe()}", file=stderr)
        return EXIT_INPUT_ERROR
    except OSError as e:
        print(f"input error: {e}", file=stderr)
        return EXIT_INPUT_ERROR
    except InconclusiveError as e:
        print(f"inconclusive: {e}", file=stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as e:
        print(f"input error: {e}", file=stderr)
        return EXIT_INPUT_ERROR
    except (ArithmeticError, RuntimeError) as e:
        print(f"inconclusive: {e}", file=stderr)
        return EXIT_INCONCLUSIVE
    if args.output == "document":
        print(ser.dumps(result.doc), file=stdout)
    else:
        print("\n".join(result.lines), file=stdout)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
