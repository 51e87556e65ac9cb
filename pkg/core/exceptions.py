"""
Custom exceptions for the laboratory.
Provides structured error handling across all domain apps; every error
carries the exit code the command-line harness reports for it.
"""

from django.core.management.base import CommandError
import logging

logger = logging.getLogger(__name__)


class LimitLabError(CommandError):
    """Base exception for laboratory errors."""

    returncode = 1
    default_detail = "A laboratory error occurred."
    default_code = "limitlab_error"

    def __init__(self, detail=None, code=None, **context):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        self.context = context
        super().__init__(self.detail, returncode=self.returncode)

    def as_dict(self):
        return {"error": self.code, "detail": str(self.detail), **self.context}


class ValidationFailure(LimitLabError):
    """Raised when inputs or results fail validation."""

    returncode = 2
    default_detail = "Validation failed."
    default_code = "validation_failed"


class DomainError(ValidationFailure):
    """Raised when an argument lies outside an operation's domain."""

    default_detail = "Argument outside the operation's domain."
    default_code = "domain_error"


class PrimalityError(DomainError):
    """Raised when a formula operation receives a composite modulus."""

    default_detail = "Modulus must be prime for this formula."
    default_code = "not_prime"


class FormulaDomainError(DomainError):
    """Raised when a closed form is evaluated where it does not apply."""

    default_detail = "Closed form is not valid for these arguments."
    default_code = "formula_domain"


class OracleMismatchError(ValidationFailure):
    """Raised when an exact-equality check against an oracle fails."""

    default_detail = "Closed form disagrees with the enumeration oracle."
    default_code = "oracle_mismatch"


class ResourceLimitError(LimitLabError):
    """Raised when a computation exceeds a configured resource limit."""

    returncode = 3
    default_detail = "Computation exceeds the configured resource limit."
    default_code = "resource_limit"

    def __init__(self, detail=None, code=None, fallback=None, **context):
        self.fallback = fallback
        super().__init__(detail, code, **context)


class PartialResultError(LimitLabError):
    """Raised when a multi-point computation completes only partially."""

    returncode = 1
    default_detail = "Computation completed only partially."
    default_code = "partial_result"

    def __init__(self, detail=None, code=None, partial=None, failures=None, **context):
        self.partial = partial
        self.failures = failures or {}
        super().__init__(detail, code, **context)


class UsageError(LimitLabError):
    """Raised for unknown subcommands or malformed flags."""

    returncode = 64
    default_detail = "Invalid command line."
    default_code = "usage"


def exit_code_for(exc):
    """
    Map an exception to the harness exit code.

    Args:
        exc: Exception instance

    Returns:
        Integer exit code (0 success / 1 partial / 2 validation / 3 resource / 64 usage)
    """
    if isinstance(exc, LimitLabError):
        return exc.returncode
    if isinstance(exc, CommandError):
        # Django raises bare CommandError for argument parsing failures
        return UsageError.returncode
    logger.error(f"Unhandled exception: {str(exc)}", exc_info=True)
    return 1
