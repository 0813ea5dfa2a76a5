"""This module contains the package's exceptions and functions for handling them."""

import logging
import traceback


class NilkahlerError(Exception):
    """Base exception for input that breaks a mathematical or grammatical rule."""


class ParseError(NilkahlerError):
    """Syntax or semantic error in a structure file."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DimensionMismatchError(NilkahlerError):
    """Operands live on coframes of different dimension."""


class FieldMismatchError(NilkahlerError):
    """Operands use different quadratic extensions."""


class BidegreeError(NilkahlerError):
    """A form has the wrong or an inhomogeneous bidegree."""


class RealityError(NilkahlerError):
    """A real form was required."""


class NotIntegrableError(NilkahlerError):
    """The structure equations carry (0,2) parts where integrability is required."""


class NotACycleError(NilkahlerError):
    """A cohomology class was requested for a form that is not a cycle."""


class SingularMatrixError(NilkahlerError):
    """A matrix that must be inverted is singular."""

    def __init__(self, message: str, determinant=None):
        super().__init__(message)
        self.determinant = determinant


class CatalogError(NilkahlerError):
    """Unknown or internally inconsistent catalog entry."""


class PreconditionError(NilkahlerError):
    """An operation was called outside its domain."""


def handle_error(message: str, error: Exception, logger: logging.Logger | None = None) -> None:
    """Log an error together with its traceback.

    Args:
        message: A message describing the context of the error.
        error: The exception that was raised.
        logger: The logger to write to, defaults to the package logger.
    """
    error_msg = f"{message}: {repr(error)}\n\nTrace:\n{traceback.format_exc()}"
    (logger or logging.getLogger("nilkahler")).error(error_msg)


def log_exception(logger: logging.Logger) -> callable:
    """Creates a function to be used as an exception hook that logs any uncaught exception.

    Args:
        logger: The logger receiving the uncaught exception.

    Returns:
        callable: A function that can be assigned to sys.excepthook.
    """
    def inner(exception_type, value, trace):
        trace_string = "".join(traceback.format_tb(trace))
        logger.error("Uncaught Exception:\nType: %s\nValue: %s\nTrace: %s", exception_type, value, trace_string)

    return inner
