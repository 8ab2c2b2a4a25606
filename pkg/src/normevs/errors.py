"""Exception hierarchy shared by every module of the package."""


class NormEvsError(Exception):
    """Base class for all package errors."""


class InstanceError(NormEvsError):
    """An evs instance violated its own contract (e.g. a short sampler)."""


class ToleranceError(NormEvsError):
    """An equality decision fell inside the indeterminate tolerance band."""


class A6Violation(NormEvsError):
    """No primitive element was found below an element."""


class DimensionMismatch(NormEvsError, ValueError):
    pass


class InvalidP(NormEvsError, ValueError):
    pass


class ZeroNormError(NormEvsError, ValueError):
    """A comparing function relative to the zero function was requested."""


class PatternMismatch(NormEvsError):
    pass


class UnknownFamily(NormEvsError, KeyError):
    def __str__(self):
        return f"unknown witness family {self.args[0]!r}" if self.args else "unknown witness family"


class BadParams(NormEvsError, ValueError):
    pass


class ParseError(NormEvsError, ValueError):
    pass
