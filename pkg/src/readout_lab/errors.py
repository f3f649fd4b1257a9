"""Exception hierarchy shared by every sub-package."""

from typing import Optional


class ReadoutLabError(Exception):
    """Base class for all library errors."""


class ParameterError(ReadoutLabError, ValueError):
    """An argument is out of range or has an incompatible shape."""


class ValidationError(ReadoutLabError, ValueError):
    """Input data violates a documented format or invariant."""


class NotPositiveDefiniteError(ReadoutLabError):
    """Cholesky factorization hit a non-positive pivot."""

    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(f"Matrix is not positive definite: failing pivot index={pivot}")


class EvaluationError(ReadoutLabError):
    """An objective evaluated to a non-finite value."""


class ConvergenceError(ReadoutLabError):
    """An iterative solver exhausted its iteration budget."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message}: final residual={residual:.3e}")


class DivergenceError(ReadoutLabError):
    """An optimizer produced a non-finite loss."""


class OptimizationError(ReadoutLabError):
    """A one-dimensional search could not be bracketed."""


class DegeneracyError(ReadoutLabError):
    """Input geometry is degenerate for the requested procedure."""


class SamplingError(ReadoutLabError):
    """An episode cannot be drawn from the available examples."""


class InsufficientClassesError(SamplingError):
    """Fewer than two classes remain eligible for an episode."""


class AssemblyError(ReadoutLabError):
    """An episode reference has no matching embedding."""

    def __init__(self, ref: object, detail: Optional[str] = None):
        self.ref = ref
        message = f"Missing embedding for reference {ref!r}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class TrainingAborted(ReadoutLabError):
    """Meta-training stopped on a non-finite loss."""

    def __init__(self, step: int, loss: float):
        self.step = step
        self.loss = loss
        super().__init__(f"Non-finite loss at step={step}: loss={loss}")
