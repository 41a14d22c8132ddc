"""Exception hierarchy.

Every failure raised by the library derives from :class:`LodeError`.  The
numeric failures (singular pivots, non-invertible jets, diverging
normalizations) additionally derive from :class:`NumericError`, which the
command-line front end maps to exit code 3.
"""


class LodeError(Exception):
    """Base class for all library errors."""


class NumericError(LodeError):
    """A computation could not be carried out at the configured tolerances."""


class BaseMismatch(LodeError, ValueError):
    pass


class OrderMismatch(LodeError, ValueError):
    pass


class BasePointMismatch(LodeError, ValueError):
    """Inner jet of a composition is not centred at the outer jet's base."""


class DivisionBySingular(NumericError):
    pass


class NonInvertibleJet(NumericError):
    pass


class NonPositiveConstantTerm(NumericError):
    pass


class SingularLeadingCoefficient(NumericError):
    pass


class OrderTooLow(LodeError, ValueError):
    pass


class NotInReducedForm(LodeError, ValueError):
    pass


class NotInLFForm(LodeError, ValueError):
    pass


class PoleAtBasePoint(NumericError):
    pass


class DegenerateMap(NumericError):
    pass


class Anomaly(NumericError):
    """A symmetry dimension outside {0, 1, 3} was computed."""


class NotRegularGerm(LodeError, ValueError):
    pass


class ClassMismatch(LodeError, ValueError):
    pass


class NormalizationDiverged(NumericError):
    pass


class ParseError(LodeError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateKey(ParseError):
    pass


class MissingLeadingCoefficient(ParseError):
    pass
