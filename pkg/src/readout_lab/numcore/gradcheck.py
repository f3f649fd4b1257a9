"""Central finite-difference validation of tape gradients."""

from typing import Callable, List, Sequence

import numpy as np

from readout_lab.errors import EvaluationError, ParameterError
from readout_lab.numcore.tape import Tape, Var


TapeProgram = Callable[[Tape, List[Var]], Var]


def _evaluate(program: TapeProgram, params: Sequence[np.ndarray]) -> float:
    tape = Tape()
    out = program(tape, [tape.param(p) for p in params])
    value = float(np.asarray(out.value).reshape(-1)[0])
    if not np.isfinite(value):
        raise EvaluationError(f"Program evaluated to a non-finite value: {value}")
    return value


def analytic_gradients(program: TapeProgram, params: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Reverse-mode gradients of a scalar tape program at params."""
    tape = Tape()
    variables = [tape.param(p) for p in params]
    out = program(tape, variables)
    if not np.all(np.isfinite(out.value)):
        raise EvaluationError("Program evaluated to a non-finite value")
    tape.backward(out)
    return [var.grad for var in variables]


def grad_check(program: TapeProgram, params: Sequence[np.ndarray], eps: float = 1e-5) -> float:
    """
    Compare reverse-mode gradients against central differences.

    Args:
        program: Builds a scalar-valued computation on the given tape from param vars
        params: Parameter matrices at which to check
        eps: Central-difference step, within [1e-6, 1e-3]

    Returns:
        max over all entries of |analytic - numeric| / max(1, |numeric|)
    """
    if not 1e-6 <= eps <= 1e-3:
        raise ParameterError(f"eps must lie in [1e-6, 1e-3], got {eps}")
    params = [np.array(p, dtype=np.float64) for p in params]
    analytic = analytic_gradients(program, params)

    worst = 0.0
    for which, param in enumerate(params):
        for index in np.ndindex(param.shape):
            shifted_values = []
            for step in (eps, -eps):
                shifted = [p.copy() for p in params]
                shifted[which][index] += step
                shifted_values.append(_evaluate(program, shifted))
            numeric = (shifted_values[0] - shifted_values[1]) / (2.0 * eps)
            error = abs(analytic[which][index] - numeric) / max(1.0, abs(numeric))
            worst = max(worst, error)
    return worst
