"""Exceptions raised by htplab.

Every domain error derives from :class:`HtpLabError`, so callers (the CLI in
particular) can separate arithmetic failures from programming errors, which
surface as ``AssertionError``.
"""


class HtpLabError(Exception):
    """Base class of all htplab errors."""

    def __init__(self, message: str = ""):
        if not message.startswith("[LOG]"):
            message = f"[LOG] {type(self).__name__}: {message}"
        super().__init__(message)


# number fields
class NotMonic(HtpLabError):
    pass


class Reducible(HtpLabError):
    pass


class DegreeZero(HtpLabError):
    pass


class UnsupportedDegree(HtpLabError):
    pass


class DivisionByZero(HtpLabError, ZeroDivisionError):
    pass


class FieldMismatch(HtpLabError):
    pass


class PrecisionExhausted(HtpLabError):
    pass


class NotIntegral(HtpLabError):
    pass


class ZeroDivisor(HtpLabError):
    pass


# ideals
class DedekindFailure(HtpLabError):
    pass


class ZeroElement(HtpLabError):
    pass


class CapTooSmall(HtpLabError):
    pass


# elliptic curves
class SingularCurve(HtpLabError):
    pass


class PointNotOnCurve(HtpLabError):
    pass


class InsufficientGoodPrimes(HtpLabError):
    pass


class StabilityNotFound(HtpLabError):
    pass


class ScanCapTooSmall(HtpLabError):
    pass


class PointAtInfinity(HtpLabError):
    pass


class OrderSearchFailed(HtpLabError):
    pass


class TorsionDegenerate(HtpLabError):
    pass


class NotDivisible(HtpLabError):
    pass


# division-ample sets
class RankAssertionMissing(HtpLabError):
    pass


class CapExceeded(HtpLabError):
    pass


class NotLinearlyDisjoint(HtpLabError):
    pass


# main theorem
class ZeroXi(HtpLabError):
    pass


class FactorialOverflow(HtpLabError):
    pass


class LemmaViolation(HtpLabError):
    """A proven implication failed on concrete data: always an implementation bug."""


# driver
class ConfigParse(HtpLabError):
    pass


class UnknownCommand(HtpLabError):
    pass
