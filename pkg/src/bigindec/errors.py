"""Exception types shared across the package.

Negative *verdicts* (a certificate that fails, a splitting that does not
exist) are ordinary return values, never exceptions; exceptions mark
violated preconditions, malformed input, or exhausted resources.
"""


class BigIndecError(Exception):
    """Base class for all package errors."""


class RingMismatchError(BigIndecError):
    """Operands live over different rings."""


class HomogeneityError(BigIndecError):
    """A polynomial, relation or map entry is not homogeneous."""


class NotFiniteLengthError(BigIndecError):
    """An operation requiring a finite-length module got an infinite one."""


class ZeroModuleError(BigIndecError):
    """The zero module was passed where a nonzero module is required."""


class CharacteristicGuardError(BigIndecError):
    """dim A >= p: trace-form radical computation is not valid.

    Raise the prime in the configuration (BIGINDEC_PRIME) and rerun.
    """


class AlgebraNotLocalError(BigIndecError):
    """An operation requiring a local algebra got a non-local one."""


class ModuleDecomposableError(BigIndecError):
    """A graded-indecomposable module was required."""


class DepthZeroError(BigIndecError):
    """A positive-depth module was required."""


class SearchExhaustedError(BigIndecError):
    """A bounded search (e.g. over truncation exponents) found nothing.

    ``diagnostics`` carries whatever table the search had built, for
    post-mortem inspection.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class MinorWorkGuardError(BigIndecError):
    """Determinantal enumeration exceeded the configured work cap."""


class ParseError(BigIndecError):
    """Input text rejected; carries 1-based line/column and the token."""

    def __init__(self, message, line, column, token=None):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.token = token
