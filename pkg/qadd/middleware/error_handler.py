"""
Exception hierarchy and command error handling
"""

import functools
import json
from pathlib import Path
from typing import Any, Callable, TypeVar

import typer
from loguru import logger
from pydantic import ValidationError

F = TypeVar("F", bound=Callable[..., Any])

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PRECONDITION = 2


class QaddException(Exception):
    """Base exception for qadd errors"""

    def __init__(self, message: str, code: str = "UNKNOWN_ERROR"):
        self.message = message
        self.code = code
        super().__init__(self.message)


class DimensionError(QaddException):
    """Matrix or subsystem dimensions do not fit"""

    def __init__(self, message: str):
        super().__init__(message, "DIMENSION_ERROR")


class InvalidStateError(QaddException):
    """Operator is not a density matrix"""

    def __init__(self, message: str):
        super().__init__(message, "INVALID_STATE")


class ChannelValidationError(QaddException):
    """Map violates isometry or CPTP invariants"""

    def __init__(self, message: str):
        super().__init__(message, "INVALID_CHANNEL")


class ChannelFileError(QaddException):
    """Channel description file cannot be read"""

    def __init__(self, message: str):
        super().__init__(message, "CHANNEL_FILE_ERROR")


class ParameterError(QaddException):
    """Family or experiment parameter out of range"""

    def __init__(self, message: str):
        super().__init__(message, "INVALID_PARAMETER")


class PreconditionError(QaddException):
    """Experiment precondition not met"""

    def __init__(self, message: str):
        super().__init__(message, "PRECONDITION_FAILED")


class OptimizationError(QaddException):
    """Optimizer produced no usable value"""

    def __init__(self, message: str):
        super().__init__(message, "OPTIMIZATION_ERROR")


_PRECONDITION_TYPES = (PreconditionError, ParameterError, ChannelFileError, ValidationError)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the command exit code"""
    if isinstance(exc, _PRECONDITION_TYPES):
        return EXIT_PRECONDITION
    return EXIT_INTERNAL


def error_payload(exc: BaseException) -> dict[str, Any]:
    """JSON body describing a failed command"""
    if isinstance(exc, QaddException):
        return {"error": exc.code, "message": exc.message}
    if isinstance(exc, ValidationError):
        return {"error": "VALIDATION_ERROR", "message": str(exc)}
    return {"error": "INTERNAL_ERROR", "message": str(exc)}


def write_error_report(out: Path | None, exc: BaseException) -> None:
    """Write the error body to the requested output, if any"""
    if out is None:
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(error_payload(exc), indent=2, sort_keys=True) + "\n")


def handle_cli_errors(report_errors: bool = False) -> Callable[[F], F]:
    """
    Decorate a CLI command so failures become exit codes

    Args:
        report_errors: also write the error body to the command's ``out`` path

    Returns:
        Decorator
    """

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except typer.Exit:
                raise
            except QaddException as exc:
                logger.error(f"qadd error: {exc.code} - {exc.message}")
                if report_errors:
                    write_error_report(kwargs.get("out"), exc)
                raise typer.Exit(code=exit_code_for(exc))
            except ValidationError as exc:
                logger.error(f"Validation error: {exc.errors()}")
                if report_errors:
                    write_error_report(kwargs.get("out"), exc)
                raise typer.Exit(code=EXIT_PRECONDITION)
            except Exception as exc:
                logger.exception(f"Unhandled exception: {exc}")
                raise typer.Exit(code=EXIT_INTERNAL)

        return wrapper  # type: ignore[return-value]

    return decorator
