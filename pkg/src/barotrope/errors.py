"""Exception types shared across the toolkit."""


class BarotropeError(Exception):
    """Base class for all toolkit errors."""


class DomainError(BarotropeError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ChartSingularityError(DomainError):
    """Evaluation requested on a coordinate-chart singularity (axis or pole)."""


class KernelSingularityError(DomainError):
    """Kernel evaluated at a coincident source/field point."""


class GridMismatchError(BarotropeError, ValueError):
    """Fields that must share a grid do not."""


class FoldError(BarotropeError, ArithmeticError):
    """Lagrangian map is not orientation preserving (det J <= 0)."""


class TraceError(BarotropeError, RuntimeError):
    """Characteristic trace failed (blow-up or domain exit).

    Carries the last valid state reached by the integrator.
    """

    def __init__(self, message, last_t=None, last_state=None):
        super().__init__(message)
        self.last_t = last_t
        self.last_state = last_state


class NoRootError(BarotropeError, RuntimeError):
    """A required zero crossing was not found within the search window."""


class NumericError(BarotropeError, RuntimeError):
    """An iterative numerical procedure failed to converge."""


class InstabilityError(BarotropeError, RuntimeError):
    """Time integration aborted by the instability detector."""

    def __init__(self, message, step=None, diagnostics=None):
        super().__init__(message)
        self.step = step
        self.diagnostics = diagnostics
