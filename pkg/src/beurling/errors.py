"""Exception types raised across the package."""


class BeurlingError(Exception):
    """Base class for all package errors."""


class StructuralError(BeurlingError, ValueError):
    """Operands are incompatible (jet base/order mismatch, zeros not preserved, ...)."""


class DomainError(BeurlingError, ValueError):
    """A point lies outside the domain where the function is defined."""


class DegenerateInputError(BeurlingError, ValueError):
    """Input parameters collapse a construction (e.g. swapping a point with itself)."""


class NotAutomorphismError(BeurlingError, ValueError):
    """A fractional-linear map does not preserve the unit disk."""


class ModeError(BeurlingError, ValueError):
    """The requested decision route does not apply to the given self-map."""


class NonFiniteError(BeurlingError, ArithmeticError):
    """A NaN or infinity appeared in a jet coefficient."""


class JetOrderExceeded(BeurlingError, ArithmeticError):
    """Every coefficient of a jet vanished; the order of vanishing exceeds the jet order."""

    def __init__(self, order: int, message: str | None = None):
        self.order = order
        super().__init__(message or f"all coefficients vanish up to order {order}")


class InconclusiveError(BeurlingError, RuntimeError):
    """The exact engine cannot reach a verdict."""


class EngineDeclined(InconclusiveError):
    """The problem lies outside the cases the exact engine characterizes."""
