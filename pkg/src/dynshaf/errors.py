"""Exception types raised across the package."""


class DynShafError(Exception):
    """Base class; every error below signals a violated precondition."""


class NegativeValuation(DynShafError):
    pass


class ZeroForm(DynShafError):
    pass


class DegreeTooSmall(DynShafError):
    pass


class DegreeMismatch(DynShafError):
    pass


class NotPrimitive(DynShafError):
    pass


class InseparableMap(DynShafError):
    pass


class NotDifferentiallySeparated(DynShafError):
    pass


class DegenerateFixedPoints(DynShafError):
    pass


class InconsistentExponents(DynShafError):
    pass


class RepeatedIndex(DynShafError):
    pass


class SingularCurve(DynShafError):
    pass


class ParseError(DynShafError):
    """Malformed text input (CLI exit code 2)."""
