"""Exception hierarchy shared by all modules."""


class AxisymError(Exception):
    """Base class for every error raised by this package."""


class BlowUpSingularity(AxisymError):
    """Closed form evaluated at or too close to its singular time."""


class DomainError(AxisymError, ValueError):
    """Argument outside the domain where the formula is defined."""


class NonFiniteState(AxisymError, ValueError):
    pass


class ParityViolation(AxisymError, ValueError):
    """Sampled data breaks the odd/even-in-r structure required on the axis."""


class SolverDivergence(AxisymError):
    pass


class CFLViolation(AxisymError, ValueError):
    pass


class NonFiniteField(AxisymError):
    pass


class UnknownIdentity(AxisymError, KeyError):
    pass


class ParseError(AxisymError, ValueError):
    pass


class ValidationError(AxisymError, ValueError):
    def __init__(self, field: str, message: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)
