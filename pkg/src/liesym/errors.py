"""Exception hierarchy shared across the toolkit."""


class LiesymError(Exception):
    """Base class for all toolkit errors."""


class DegenerateExpression(LiesymError):
    """Raised when an operation would divide by the constant zero."""


class UnknownSymbol(LiesymError):
    """Raised when a symbol is used outside the declared scope."""


class NotPolynomial(LiesymError):
    """Raised when an expression is not polynomial in the requested variables."""


class ArityError(LiesymError):
    """Raised on tuple-length mismatches (currents, characteristics, ...)."""


class OrderError(LiesymError):
    """Raised when a jet order exceeds what an operation supports."""


class OrderCapExceeded(LiesymError):
    """Raised when reduction modulo a system needs prolongations beyond the cap."""


class InvalidSample(LiesymError):
    """Raised when a rank-probe sample does not lie on the system variety."""


class NotASymmetry(LiesymError):
    """Raised when a conserved current is requested for a non-symmetry."""


class DegenerateDenominator(LiesymError):
    """Raised when a derived-invariant denominator vanishes identically."""


class NotSolvedForm(LiesymError):
    """Raised for systems that cannot be oriented as lead = rhs rewrite rules."""


class EvaluationError(LiesymError):
    """Raised when an expression cannot be evaluated to an exact rational."""


class ParseError(LiesymError):
    """Syntax or resolution error with source position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
