"""Exception types shared across the package.

``ValidationError`` subclasses signal rejected inputs (preconditions that can
be checked before any heavy computation starts); everything else derived from
``BscError`` signals a failure *during* computation.  The CLI maps the two
groups to different exit codes.
"""


class BscError(Exception):
    """Base class: a computation could not be completed."""


class ValidationError(BscError):
    """Inputs violate a documented precondition."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of the operation."""


class UnsupportedRegimeError(ValidationError):
    """Exponent regime makes the requested quantity divergent or undefined."""


class ConditioningError(ValidationError):
    """Request refused because it lies outside the well-conditioned range."""


class ChartDomainError(ValidationError):
    """Point outside the validity region of the boundary chart."""


class QuadratureError(BscError):
    """Adaptive quadrature hit its subdivision limit before converging."""


class BracketError(BscError):
    """Monotone bracketing failed to enclose the requested target value."""


class ConstancyError(BscError):
    """A quantity that must be pointwise constant showed excessive spread."""


class FitDegeneracyError(BscError):
    """Residuals of an asymptotic fit exceed the admissible band."""
