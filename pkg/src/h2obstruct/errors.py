"""Exception hierarchy shared by every module.

Input errors derive from :class:`InputError` (the CLI maps them to exit
status 2); :class:`InvariantViolation` marks internal failures (exit 3).
"""


class H2Error(Exception):
    """Base class for all package errors."""


class InputError(H2Error):
    pass


class InvariantViolation(H2Error):
    pass


class SingularMatrix(InputError):
    pass


class Indefinite(InputError):
    pass


class EvenDeterminant(InputError):
    pass


class NonCyclic(InputError):
    pass


class EvenModulus(InputError):
    pass


class OutOfRange(InputError):
    pass


class PDSyntaxError(InputError):
    """Malformed PD text. ``offset`` is the byte offset of the bad term."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class LabelError(InputError):
    pass


class InconsistentDiagram(InputError):
    pass


class NotAlternating(InputError):
    pass


class NotReduced(InputError):
    pass


class NoDefiniteColoring(InputError):
    pass


class NotAKnot(InputError):
    pass


class InconsistentBounds(InputError):
    pass


class BoundExceeded(InputError):
    pass


class OracleMismatch(InvariantViolation):
    pass


def error_name(exc):
    """Name reported on stderr; PD syntax errors keep their grammar-level name."""
    if isinstance(exc, PDSyntaxError):
        return "SyntaxError"
    return type(exc).__name__
