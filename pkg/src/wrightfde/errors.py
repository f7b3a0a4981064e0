"""Exception hierarchy shared by all modules."""


class WrightFdeError(Exception):
    """Base class for package errors."""


class PoleError(WrightFdeError, ValueError):
    """Gamma function evaluated at a non-positive integer."""


class DomainError(WrightFdeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateOrderError(DomainError):
    """Operation undefined for the degenerate order beta == 1."""


class ConvergenceError(WrightFdeError, ArithmeticError):
    """A series or quadrature could not meet its error bound."""


class DensityCancellationError(ConvergenceError):
    """Alternating Wright series lost too many digits to cancellation."""


class IntegrationError(WrightFdeError, RuntimeError):
    """Adaptive integrator gave up; ``t_last`` is the last accepted time."""

    def __init__(self, message, t_last):
        super().__init__(f"{message} (last good time {t_last!r})")
        self.t_last = t_last


class ResonanceError(DomainError):
    """Preset parameters hit an excluded resonance."""


class TrainingDivergedError(WrightFdeError, RuntimeError):
    """Training loss blew up."""
