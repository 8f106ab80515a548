"""Domain exceptions.

Every error carries the process exit code the command line reports for it and a
human-readable detail, so services can raise them directly.
"""

EXIT_ASSERTION_FAILED = 1
EXIT_USAGE = 2


class CartanError(Exception):
    """Base class for all errors raised by the engine."""

    exit_code: int = EXIT_ASSERTION_FAILED

    def __init__(self, detail: str, exit_code: int | None = None) -> None:
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class FieldError(CartanError):
    """Invalid field arithmetic (zero inverse, bad binomial, bad modulus)."""

    exit_code = EXIT_USAGE


class ParameterError(CartanError):
    """Invalid algebra parameters n, p, t."""

    exit_code = EXIT_USAGE


class IndexRangeError(CartanError):
    """A superderivation index outside Y = {1, ..., 2n}."""

    exit_code = EXIT_USAGE


class ParityError(CartanError):
    """An operation that needs a parity-homogeneous input got a mixed one."""


class GradingError(CartanError):
    """Inconsistent Z-grading or a non-homogeneous input."""


class NotInSubspaceError(CartanError):
    """A vector left the subspace it was expected to live in."""


class DerivationCheckError(CartanError):
    """A computed map failed an exact consistency check."""


class ExportError(CartanError):
    """Export documents that cannot be written or read back."""

    exit_code = EXIT_USAGE


class OptionError(CartanError):
    """A command option the chosen operation does not accept."""

    exit_code = EXIT_USAGE
