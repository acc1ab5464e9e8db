"""
Error handling for groupalg
Exception hierarchy, exit-code mapping and the safe-execution helpers used by the
command line and the corpus runners
"""
import sys
import traceback
from typing import Any, Callable, Optional

from utils.logging_utils import log_error, log_warning

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2


class GroupalgError(Exception):
    """Base class for every error raised by groupalg."""

    exit_code = EXIT_VALIDATION


class FixtureError(GroupalgError):
    """Input file missing, unreadable or structurally inconsistent."""


class SchemaError(FixtureError):
    """Input file does not match its JSON schema."""


class ValidationFailure(GroupalgError):
    """An object failed validation where validity is a precondition."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class CocycleValueError(GroupalgError):
    """Cocycle value is not unimodular, or not real for the real field."""


class UnsupportedFieldError(GroupalgError):
    """The oracle needs an algebraically closed field."""


class UnitalityError(GroupalgError):
    """The algebra has no unit."""


class BoundExceededError(GroupalgError):
    """An explicit enumeration cap was hit."""


class PreconditionError(GroupalgError):
    """An operation was called outside its domain."""


class UsageError(GroupalgError):
    exit_code = EXIT_USAGE


class ErrorHandler:
    """Maps exceptions to exit codes and user-facing messages"""

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        if isinstance(error, GroupalgError):
            return error.exit_code
        return EXIT_VALIDATION

    @staticmethod
    def describe(error: BaseException) -> str:
        """Short user-facing message"""
        name = type(error).__name__
        if isinstance(error, ValidationFailure) and error.report is not None:
            lines = [f"{name}: {error}"]
            for violation in error.report.violations:
                lines.append(f"  - [{violation.code}] {violation.message} (witness: {violation.witness})")
            return "\n".join(lines)
        return f"{name}: {error}"

    @staticmethod
    def show_error(error: BaseException, stream=None) -> None:
        stream = stream or sys.stderr
        print(ErrorHandler.describe(error), file=stream)


def safe_execute(func: Callable, *args, error_message: str = "An error occurred", **kwargs) -> Any:
    """
    Safely execute a function with error handling
    Args:
        func: Function to execute
        error_message: Message logged on failure
        *args, **kwargs: Arguments to pass to the function
    Returns:
        Function result or None if error occurred
    """
    try:
        return func(*args, **kwargs)
    except GroupalgError as e:
        log_warning(f"{error_message}: {func.__name__}: {e}")
        return None
    except Exception as e:
        log_error(f"{error_message}: {func.__name__}: {e}\n{traceback.format_exc()}")
        return None


def with_error_boundary(func):
    """
    Decorator for command handlers: known errors become exit codes
    Usage:
        @with_error_boundary
        def cmd_graph(args) -> int:
            ...
    """
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except GroupalgError as e:
            log_error(f"Error in {func.__name__}: {e}")
            ErrorHandler.show_error(e)
            return ErrorHandler.exit_code_for(e)
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


def handle_validation_error(report, subject: str = "input") -> None:
    """Raise ValidationFailure when a validation report is non-empty."""
    if report.violations:
        log_error(f"Validation failed for {subject}: {len(report.violations)} violation(s)")
        raise ValidationFailure(f"invalid {subject}", report=report)


class FixtureValidator:
    """Lightweight structural checks run after schema validation"""

    @staticmethod
    def check(name: str, *messages: Optional[str]) -> None:
        """Raise FixtureError on the first non-empty message."""
        for message in messages:
            if message:
                log_error(f"{name}: {message}")
                raise FixtureError(f"{name}: {message}")

    @staticmethod
    def validate_labels(declared, used, what: str) -> Optional[str]:
        """Every label used must have been declared."""
        unknown = sorted(set(used) - set(declared))
        if unknown:
            return f"unknown {what}: {', '.join(map(str, unknown[:5]))}"
        return None

    @staticmethod
    def validate_unique(labels, what: str) -> Optional[str]:
        seen = set()
        for label in labels:
            if label in seen:
                return f"duplicate {what}: {label}"
            seen.add(label)
        return None
