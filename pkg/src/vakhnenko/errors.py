"""Exception hierarchy shared by all modules."""


class VakhnenkoError(Exception):
    """Base class for every error raised by the package."""


class DomainError(VakhnenkoError, ValueError):
    """A parameter lies outside the domain where a construction is defined."""


class BasisMismatchError(VakhnenkoError, ValueError):
    """Two exponential polynomials built on different phase bases were combined."""


class ExpOverflowError(VakhnenkoError, OverflowError):
    """An exponent argument exceeded the representable range."""

    def __init__(self, message, exponent=None, argument=None):
        super().__init__(message)
        self.exponent = exponent
        self.argument = argument


class NonPositiveTauError(VakhnenkoError, ArithmeticError):
    """The tau function was found to be non-positive where a logarithm is needed."""


class SingularConfigurationError(VakhnenkoError, ZeroDivisionError):
    """A closed-form coefficient has a vanishing denominator."""


class CertificationError(VakhnenkoError):
    """A candidate tau function failed its residual certification.

    The failing report is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
