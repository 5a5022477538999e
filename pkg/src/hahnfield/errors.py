"""Exception hierarchy shared by every module of the package."""


class HahnFieldError(Exception):
    """Base class for all library errors."""


class ConfigurationError(HahnFieldError):
    """Bad spine, field configuration, or mismatched spines."""


class MathError(HahnFieldError):
    """A mathematically undefined operation (division by zero, log of a negative...)."""


class NoAsymptoticIntegral(MathError):
    """The valuation of the input equals the least upper bound of the theta values."""


class HookUndefined(MathError):
    """A coefficient hook (log_k or exp_k) is not defined on the requested value."""


class PrecisionError(MathError):
    """A question cannot be decided from the known (untruncated) part of a series."""


class DepthError(MathError):
    """The exponential tower would exceed its depth budget."""


class DomainError(MathError):
    """A germ cannot be evaluated at the requested point."""


class ParseError(HahnFieldError):
    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line = line
        self.column = col
        super().__init__(f"{message} at line {line}, column {col}")
