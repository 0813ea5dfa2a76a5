"""This module contains the work behind each subcommand."""

from __future__ import annotations

import argparse
import logging
from fractions import Fraction

from nilkahler import catalog, cohomology, config, deformation, reports, special_structures, structure, transversality
from nilkahler.algebra.scalars import Scalar
from nilkahler.algebra.verdict import Verdict
from nilkahler.exceptions import NilkahlerError
from nilkahler.grammar import StructureDocument, format_document, parse_file

logger = logging.getLogger(__name__)

CATALOG_PREFIX = "catalog:"

FLAG_CHECKS = {
    "integrable": structure.check_integrable,
    "nilpotent": structure.check_nilpotent_coframe,
    "parallelizable": structure.check_parallelizable,
    "salamon": structure.check_salamon,
}

STRUCTURE_CHECKS = {
    "pkahler": special_structures.check_pkahler,
    "ppluriclosed": special_structures.check_ppluriclosed,
    "psymplectic": special_structures.check_psymplectic,
}

Result = tuple[list[str], int]


def load_source(source: str) -> StructureDocument:
    """A structure file path, or catalog:NAME for a built-in entry."""
    if source.startswith(CATALOG_PREFIX):
        return catalog.load_entry(source[len(CATALOG_PREFIX):]).document
    return parse_file(source)


def exit_code(verdict: Verdict) -> int:
    if verdict.is_certified:
        return config.EXIT_CERTIFIED
    if verdict.is_refuted:
        return config.EXIT_REFUTED
    return config.EXIT_UNKNOWN


def parse_bidegree(text: str) -> tuple[int, int]:
    try:
        p, q = (int(part) for part in text.strip("()").split(","))
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"expected a bidegree p,q, got {text!r}") from error
    return p, q


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as error:
        raise argparse.ArgumentTypeError(f"expected a rational number such as 1/3, got {text!r}") from error


def verify(args: argparse.Namespace) -> Result:
    S = load_source(args.source).structure
    checks = [args.check] if args.check else list(FLAG_CHECKS)
    lines = [reports.verdict_line("d2", structure.check_d_squared(S), structure=S.name)]
    code = config.EXIT_CERTIFIED
    for check in checks:
        verdict = FLAG_CHECKS[check](S)
        lines.append(reports.verdict_line("verify", verdict, check=check))
        if args.check:
            code = exit_code(verdict)
    return lines, code


def diff(args: argparse.Namespace) -> Result:
    document = load_source(args.source)
    value = structure.apply_operator(document.structure, args.op, document.form(args.form))
    return [reports.line("diff", op=args.op, form=args.form, zero=value.is_zero(), value=value)], config.EXIT_CERTIFIED


def structure_check(args: argparse.Namespace) -> Result:
    document = load_source(args.source)
    S = document.structure
    if args.kind in special_structures.METRIC_KINDS:
        report = special_structures.check_metric(S, document.metric(), args.kind)
    else:
        if args.form is None or args.p is None:
            raise NilkahlerError(f"--kind {args.kind} needs --form and --p")
        report = STRUCTURE_CHECKS[args.kind](S, document.form(args.form), args.p, method=args.method, seed=args.seed)
    return reports.structure_lines(report), exit_code(report.verdict)


def transverse(args: argparse.Namespace) -> Result:
    document = load_source(args.source)
    verdict = transversality.certify(document.form(args.form), method=args.method, tolerance=args.tol, seed=args.seed)
    return [reports.verdict_line("transverse", verdict, form=args.form)], exit_code(verdict)


def cohomology_groups(args: argparse.Namespace) -> Result:
    S = load_source(args.source).structure
    if args.theory == "dR":
        degrees = [args.degree] if args.degree is not None else list(range(2 * S.n + 1))
    elif args.bidegree is not None:
        degrees = [args.bidegree]
    else:
        degrees = [(p, q) for p in range(S.n + 1) for q in range(S.n + 1)]
    lines = [reports.cohomology_line(cohomology.cohomology(S, args.theory, degree)) for degree in degrees]
    return lines, config.EXIT_CERTIFIED


def class_check(args: argparse.Namespace) -> Result:
    document = load_source(args.source)
    verdict = cohomology.class_is_zero(document.structure, document.form(args.form), args.theory)
    return [reports.class_line(args.theory, verdict)], exit_code(verdict)


def deform(args: argparse.Namespace) -> Result:
    document = load_source(args.curve)
    S = document.structure
    V = document.vector_form(args.vform)
    omega = document.form(args.omega)
    omega_prime = document.form(args.omega_prime) if args.omega_prime else None
    maurer_cartan = deformation.maurer_cartan_check(S, V)
    residual, verdict = deformation.first_order_obstruction(S, V, omega, omega_prime)
    lines = [reports.verdict_line("maurer-cartan", maurer_cartan, vform=args.vform),
             reports.line("obstruction", omega=args.omega, residual=residual),
             reports.class_line("delbar", verdict)]
    if args.t is not None:
        t = Scalar.coerce(args.t)
        value = deformation.deformed_delbar(S, V.scale(t), omega)
        lines.append(reports.line("deformed-delbar", t=args.t, zero=value.central.is_zero(), value=value.central))
    if not args.expect_curve:
        return lines, config.EXIT_CERTIFIED
    # without --omega-prime a zero class is enough, the primitive supplies Omega'
    starts = verdict.is_certified and (omega_prime is None or residual.is_zero())
    code = config.EXIT_CERTIFIED if starts else config.EXIT_REFUTED
    return lines, code


def catalog_command(args: argparse.Namespace) -> Result:
    if args.action == "list":
        lines = []
        for name in catalog.names():
            entry = catalog.load_entry(name)
            lines.append(reports.line("entry", name=name, n=entry.structure.n, expectations=len(entry.expectations),
                                      description=entry.description))
        return lines, config.EXIT_CERTIFIED
    if args.action == "show":
        if not args.names:
            raise NilkahlerError("catalog show needs an entry name")
        lines = []
        for name in args.names:
            entry = catalog.load_entry(name)
            lines.append(f"# {entry.description}")
            lines.extend(format_document(entry.document).splitlines())
            lines.extend(f"# expect {expectation.describe()}" for expectation in entry.expectations)
        return lines, config.EXIT_CERTIFIED
    results = catalog.selftest(args.names or None)
    lines = [reports.line("selftest", entry=r.entry, tag=r.expectation.tag, check=r.expectation.check,
                          expected=r.expectation.expected, observed=r.observed, passed=r.passed) for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(reports.line("selftest-summary", total=len(results), failed=failed))
    return lines, config.EXIT_CERTIFIED if failed == 0 else config.EXIT_REFUTED


COMMANDS = {
    "verify": verify,
    "diff": diff,
    "structure": structure_check,
    "transverse": transverse,
    "cohomology": cohomology_groups,
    "class": class_check,
    "deform": deform,
    "catalog": catalog_command,
}


def process(args: argparse.Namespace) -> Result:
    """Do the requested command and return its report lines and exit code."""
    logger.debug("Running command %s.", args.command)
    return COMMANDS[args.command](args)
