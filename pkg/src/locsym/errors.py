"""Exception types shared across the package.

The CLI maps these onto exit codes: bad input data is an InputError
(exit 2), constructions the engine deliberately refuses are an
UnsupportedError (exit 3), and numerical failures inside the
complex-float kernels are a NumericsError (also exit 3, since they
signal an input outside the supported regime rather than a bug).
"""


class LocsymError(Exception):
    """Base class for package errors."""


class InputError(LocsymError):
    """Malformed or dimensionally inconsistent input data."""


class UnsupportedError(LocsymError):
    """Construction outside the supported fragment (by design)."""


class StratificationError(UnsupportedError):
    """Case splitting hit a pivot it cannot linearize, or went too deep."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class NumericsError(LocsymError):
    """A float kernel left its validated regime (norm budget, spectrum)."""


class InternalCheckError(LocsymError):
    """A built-in self check failed; indicates a bug, not bad input."""
