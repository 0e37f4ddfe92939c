"""Exception hierarchy shared by the engine and the command line."""


class PictauError(Exception):
    """Base class for all errors raised by pictau."""


class InputError(PictauError, ValueError):
    """Input is well-formed but mathematically invalid (duplicate lines, c_1 violations, ...)."""


class SymbolicRegimeError(InputError):
    """Raised when a numeric answer needs Pic^0(X) = 0 but the variety has a continuous part."""


class InvariantError(PictauError, AssertionError):
    """An internal consistency check failed. This always indicates a bug or a model violation."""


class SpecParseError(PictauError):
    """The input document is not valid JSON or does not follow the schema (CLI exit 2)."""
