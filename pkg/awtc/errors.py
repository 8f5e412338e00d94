import functools
import logging
from typing import Callable

from pydantic import ValidationError

# Set up logging
logger = logging.getLogger(__name__)


class AwtcError(Exception):
    """Base class for every error raised by awtc."""

    exit_code = 1


class DimensionMismatchError(AwtcError, ValueError):
    """Operand lengths or shapes disagree."""

    exit_code = 5


class DomainError(AwtcError, ValueError):
    """An argument lies outside the domain of the operation."""

    exit_code = 5


class PreconditionError(AwtcError):
    """A structural precondition (full rank, solvability, ...) does not hold."""

    exit_code = 5


class InstanceTooLargeError(AwtcError):
    """An exact enumeration would exceed its configured cap."""

    exit_code = 3

    def __init__(self, what: str, size: float, cap: float):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class MatrixFormatError(AwtcError, ValueError):
    """A matrix, code or channel file cannot be parsed."""

    exit_code = 4


class ConfigError(AwtcError):
    """Experiment configuration is invalid."""

    exit_code = 2


class UnknownCommandError(ConfigError):
    """No handler is registered for the requested subcommand."""


def check_cap(what: str, size: float, cap: float) -> None:
    """Raise InstanceTooLargeError when size exceeds cap."""
    if size > cap:
        raise InstanceTooLargeError(what, size, cap)


def handle_errors(func: Callable[..., int]) -> Callable[..., int]:
    """
    Wrap a command entry point so every failure becomes an exit status.

    Args:
        func: callable returning an exit status

    Returns:
        Wrapped callable; awtc errors are logged without a traceback,
        anything else is logged with one.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)

        except ValidationError as e:
            logger.error(f"Invalid configuration: {e}")
            return ConfigError.exit_code

        except AwtcError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return e.exit_code

        except Exception as e:
            logger.error(f"Unhandled exception: {e}", exc_info=True)
            return 1

    return wrapper
