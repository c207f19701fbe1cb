"""Command line: normalize, differentiate, apply the co-structures, run the suites."""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, Family, differential_algebra, format_terms, normalize
from .calculus import (InconsistentCalculusError, derive_two_form_relations, differentiate, verify_calculus,
                       verify_two_forms)
from .coeffs import CoefficientError, parse_bindings
from .consistency import verify_consistency
from .forms import (BasisError, NoSolutionError, OmegaHopf, derive_cross_relations,
                    derive_form_form_relations, embedding_checks, omega_algebra, verify_cross_relations,
                    verify_form_form_relations, verify_omega)
from .hopf import GRADED, UNGRADED, DegreeError, hopf_structure, verify_axioms
from .parser import ExprSyntaxError, parse_expression, evaluate
from .report import Check, Report, check, info
from .rmatrix import verify_braid, verify_coherence, verify_consistency_solver, solve_consistency

SUITES = ("consistency", "calculus", "hopf", "omega", "braid", "all")


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=("I", "II"), default="I")
    p.add_argument("--set", dest="bindings", action="append", default=[], metavar="K=V",
                   help="substitute a parameter, e.g. --set s=q*r (repeatable)")
    p.add_argument("--fuel", type=int, default=100, help="number of random samples per suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--convention", choices=(GRADED, UNGRADED), default=GRADED,
                   help="sign convention for the antipode")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsuperplane",
                                     description="Differential calculus on the quantum superplane.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("normalize", "normal-order an expression"),
                        ("diff", "apply the exterior differential"),
                        ("coproduct", "apply the coproduct"),
                        ("antipode", "apply the antipode")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--expr", required=True)
        _common(p)
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    _common(p)
    p = sub.add_parser("solve", help="solve the consistency system")
    p.add_argument("what", choices=("consistency",))
    _common(p)
    p = sub.add_parser("derive", help="derive relations")
    p.add_argument("what", choices=("twoforms", "forms"))
    _common(p)
    return parser


def _command_echo(argv: Sequence[str]) -> str:
    return " ".join(argv)


def _algebra_for(src: str, family, bindings):
    node = parse_expression(src)
    uses_forms = any(tok in ("w", "u") for tok in _generator_names(node))
    alg = omega_algebra(family, bindings) if uses_forms else differential_algebra(family, bindings)
    return alg, evaluate(node, alg)


def _generator_names(node) -> List[str]:
    from .parser import Gen, Neg, Product, Sum
    if isinstance(node, Gen):
        return [node.name]
    if isinstance(node, Neg):
        return _generator_names(node.item)
    if isinstance(node, (Product, Sum)):
        return [n for it in node.items for n in _generator_names(it)]
    return []


def _result(report: Report, label: str, expr: str, value) -> None:
    report.output = str(value)
    report.plain = True
    report.checks.append(info(label, expr, str(value)))


def _run_normalize(args, report: Report) -> None:
    alg, a = _algebra_for(args.expr, args.family, report.bindings)
    _result(report, "normalize", args.expr, normalize(a))


def _run_diff(args, report: Report) -> None:
    alg, a = _algebra_for(args.expr, args.family, report.bindings)
    if alg.name != "Gamma":
        raise UsageError("d is applied to expressions in x, xinv, th, dx, dth")
    _result(report, "d", args.expr, differentiate(a))


def _costructure(args, report: Report):
    alg, a = _algebra_for(args.expr, args.family, report.bindings)
    if alg.name == "Gamma":
        return hopf_structure(args.family, report.bindings, args.convention), a
    return OmegaHopf(alg, args.convention), a


def _run_coproduct(args, report: Report) -> None:
    h, a = _costructure(args, report)
    _result(report, "coproduct", args.expr, h.delta(normalize(a)))


def _run_antipode(args, report: Report) -> None:
    h, a = _costructure(args, report)
    _result(report, "antipode", args.expr, h.antipode(normalize(a)))


def _suite_registry(args, bindings) -> Dict[str, Callable[[], List[Check]]]:
    fam, fuel, seed = args.family, args.fuel, args.seed
    return {
        "consistency": lambda: (verify_consistency(fam, fuel, seed, bindings)
                                + verify_coherence(fam, bindings) + verify_consistency_solver()),
        "calculus": lambda: verify_calculus(fam, fuel, seed, bindings),
        "hopf": lambda: verify_axioms(fam, fuel, seed, bindings, args.convention),
        "omega": lambda: verify_omega(fam, bindings, fuel, seed),
        "braid": lambda: verify_braid(fam, bindings),
    }


def _run_verify(args, report: Report) -> None:
    registry = _suite_registry(args, report.bindings)
    names = [n for n in SUITES if n != "all"] if args.suite == "all" else [args.suite]
    for name in names:
        report.extend(registry[name]())


def _run_solve(args, report: Report) -> None:
    report.family = None
    lines = [sol.describe() for sol in solve_consistency()]
    report.output = "\n".join(lines)
    report.extend(verify_consistency_solver())


def _relations_text(table) -> str:
    return "\n".join(f"{' '.join(lhs)} = {format_terms(rhs) if rhs else '0'}" for lhs, rhs in table.items())


def _run_derive(args, report: Report) -> None:
    if args.what == "twoforms":
        table = derive_two_form_relations(args.family, report.bindings)
        report.output = _relations_text(table)
        report.extend(verify_two_forms(args.family, report.bindings))
    else:
        cross = derive_cross_relations(args.family, report.bindings)
        ff = derive_form_form_relations(args.family, report.bindings)
        report.output = _relations_text({**cross, **ff})
        report.extend(verify_cross_relations(args.family, report.bindings))
        report.extend(verify_form_form_relations(args.family, report.bindings))
        report.extend(embedding_checks(args.family, report.bindings))


HANDLERS = {
    "normalize": _run_normalize,
    "diff": _run_diff,
    "coproduct": _run_coproduct,
    "antipode": _run_antipode,
    "verify": _run_verify,
    "solve": _run_solve,
    "derive": _run_derive,
}


def run(argv: Optional[Sequence[str]] = None) -> Tuple[Optional[Report], int, Optional[str]]:
    """Parse ``argv`` and execute; returns (report or None, exit code, error message)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, int(exc.code or 0), None
    try:
        bindings = {k: str(v) for k, v in parse_bindings(args.bindings).items()}
    except (ValueError, CoefficientError) as exc:
        return None, 2, f"error: {exc}"
    seed = args.seed if args.command == "verify" else None
    report = Report(_command_echo(argv), args.family, bindings, seed, as_json=args.json)
    try:
        HANDLERS[args.command](args, report)
    except (ExprSyntaxError, UsageError) as exc:
        return None, 2, f"error: {exc}"
    except (AlgebraError, CoefficientError, InconsistentCalculusError, BasisError, NoSolutionError,
            DegreeError, KeyError, ValueError) as exc:
        report.checks.append(check("internal consistency", "no error", False, f"{type(exc).__name__}: {exc}"))
    return report, report.exit_code, None


def main(argv: Optional[Sequence[str]] = None) -> int:
    report, code, error = run(argv)
    if error:
        print(error, file=sys.stderr)
    if report is not None:
        print(report.to_json() if report.as_json else report.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
