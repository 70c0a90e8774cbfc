"""Exception hierarchy shared by every module of the package."""


class CuspidalError(Exception):
    """Base class for all errors raised by :mod:`cuspidal`."""


class OrderMismatch(CuspidalError, ValueError):
    pass


class OrderExhausted(CuspidalError, ValueError):
    pass


class ZeroConstantTerm(CuspidalError, ZeroDivisionError):
    pass


class NonPositiveConstantTerm(CuspidalError, ValueError):
    pass


class NotDivisible(CuspidalError, ValueError):
    pass


class NonvanishingConstant(CuspidalError, ValueError):
    pass


class ConstraintViolation(CuspidalError, ValueError):
    pass


class NormalDegenerate(CuspidalError, ValueError):
    pass


class NotFirstKind(CuspidalError, ValueError):
    pass


class NotApplicable(CuspidalError, ValueError):
    pass


class RegularityViolation(CuspidalError, ValueError):
    pass


class NotCrossCap(CuspidalError, ValueError):
    pass


class DegenerateDPC(CuspidalError, ValueError):
    pass


class HessianRankNotOne(CuspidalError, ValueError):
    pass


class FactorizationFailure(CuspidalError, ArithmeticError):
    pass


class InvalidModuli(CuspidalError, ValueError):
    pass


class CoefficientFileError(CuspidalError, ValueError):
    """Malformed coefficient file; ``lineno`` points at the offending line."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
