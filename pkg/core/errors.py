"""
Exception types raised by the geometry core.
Every message starts with the [NeutralGeom] prefix so CLI output stays greppable.
"""

PREFIX = "[NeutralGeom]"


class GeometryError(Exception):
    def __init__(self, message: str):
        if not message.startswith(PREFIX):
            message = f"{PREFIX} {message}"
        super().__init__(message)


class DomainError(GeometryError, ValueError):
    """Point outside a chart domain, non-finite input, or malformed arguments."""


class ChartError(DomainError):
    """The requested object leaves the coordinate chart (denominator blow-up)."""


class ExistenceError(DomainError):
    """No real solution exists for the requested parameters."""


class DegeneracyError(GeometryError, ArithmeticError):
    """Singular metric where an inverse is required."""


class IllConditionedError(DegeneracyError):
    pass


class NumericalError(GeometryError, ArithmeticError):
    """A finite-difference derivative came out non-finite."""


class ConvexityError(GeometryError, ValueError):
    pass


class PoleError(GeometryError, ArithmeticError):
    """A closed-form expression was evaluated on its pole set."""


class ConsistencyError(GeometryError, RuntimeError):
    """Two computations that must agree did not. Never silently repaired."""
