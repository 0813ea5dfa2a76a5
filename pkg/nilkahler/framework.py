"""This module is the primary module of the command line. It collects the functionality of the rest of the package."""

from __future__ import annotations

import argparse
import logging
import sys

from nilkahler import config, initialize, process
from nilkahler.cohomology import THEORIES
from nilkahler.exceptions import NilkahlerError, handle_error, log_exception
from nilkahler.special_structures import METRIC_KINDS, STRUCTURE_KINDS
from nilkahler.transversality import METHODS

logger = logging.getLogger(__name__)


def _add_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("source", help="structure file, or catalog:NAME")


def _add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilkahler",
                                     description="Exact checks of invariant complex geometry on nilmanifolds.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="structural checks of the structure equations")
    _add_source(verify)
    verify.add_argument("--check", choices=sorted(process.FLAG_CHECKS))

    diff = commands.add_parser("diff", help="apply d, del, delbar or deldelbar to a named form")
    _add_source(diff)
    diff.add_argument("--form", required=True)
    diff.add_argument("--op", choices=("d", "del", "delbar", "deldelbar"), default="d")

    structure = commands.add_parser("structure", help="p-Kaehler, p-pluriclosed, p-symplectic or metric checks")
    _add_source(structure)
    structure.add_argument("--kind", required=True, choices=STRUCTURE_KINDS + METRIC_KINDS)
    structure.add_argument("--p", type=int)
    structure.add_argument("--form")
    structure.add_argument("--method", choices=METHODS, default="auto")
    _add_seed(structure)

    transverse = commands.add_parser("transverse", help="transversality of a real (p,p)-form")
    _add_source(transverse)
    transverse.add_argument("--form", required=True)
    transverse.add_argument("--method", choices=METHODS, default="auto")
    transverse.add_argument("--tol", type=float, default=config.MINIMIZER_TOLERANCE)
    _add_seed(transverse)

    groups = commands.add_parser("cohomology", help="dimensions of invariant cohomology groups")
    _add_source(groups)
    groups.add_argument("--theory", choices=THEORIES, default="delbar")
    groups.add_argument("--bidegree", type=process.parse_bidegree)
    groups.add_argument("--degree", type=int)

    cls = commands.add_parser("class", help="decide whether the class of a cycle vanishes")
    _add_source(cls)
    cls.add_argument("--form", required=True)
    cls.add_argument("--theory", choices=THEORIES, default="delbar")

    deform = commands.add_parser("deform", help="first-order obstruction along a deformation curve")
    deform.add_argument("--curve", required=True, help="structure file with a vector form, or catalog:NAME")
    deform.add_argument("--omega", required=True)
    deform.add_argument("--omega-prime")
    deform.add_argument("--vform", default="V")
    deform.add_argument("--t", type=process.parse_rational,
                        help="rational parameter for the deformed delbar, e.g. 1/3")
    deform.add_argument("--expect-curve", action="store_true",
                        help="exit 1 unless the curve of p-Kaehler structures can start")

    cat = commands.add_parser("catalog", help="built-in manifolds and their expected verdicts")
    cat.add_argument("action", choices=("list", "show", "selftest"))
    cat.add_argument("names", nargs="*")
    return parser


def main(argv: list[str] | None = None) -> int:
    """The entry point for the command line. Returns the exit code."""
    args = build_parser().parse_args(argv)
    initialize.initialize(args.verbose)
    sys.excepthook = log_exception(logger)
    logger.debug("nilkahler started.")

    try:
        lines, code = process.process(args)

    # Input that breaks a mathematical rule is a usage error.
    except NilkahlerError as error:
        handle_error("Input Error", error, logger)
        return config.EXIT_USAGE

    # We actually want to catch all exceptions possible here.
    # pylint: disable-next = broad-exception-caught
    except Exception as error:
        handle_error("Process Error", error, logger)
        raise RuntimeError("Process failed.") from error

    for text in lines:
        print(text)
    return code
