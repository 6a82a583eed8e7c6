"""Fixed-step classical Runge-Kutta integration.

An ODE field is any callable ``field(x, u) -> xdot`` mapping a state
sequence and an input sequence to the state derivative; evaluation must be
pure.  States are handled as plain Python sequences of scalars so the same
field code runs on floats (simulation) and on duals (sensitivity
propagation inside the predictive controller).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .dual import Dual, value

__all__ = ["NumericsError", "rk4_step"]


class NumericsError(ArithmeticError):
    """Non-finite value produced during numerical evaluation."""

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state


def _finite(xs) -> bool:
    total = 0.0
    for x in xs:
        total += x.val if isinstance(x, Dual) else x
    return math.isfinite(total)


def rk4_step(field: Callable, x: Sequence, u: Sequence, h: float) -> list:
    """One classical fourth-order Runge-Kutta step of size ``h``.

    Raises :class:`NumericsError` carrying the offending state when a stage
    derivative is non-finite.
    """
    k1 = field(x, u)
    if not _finite(k1):
        raise NumericsError("non-finite derivative in RK4 stage 1", state=[value(v) for v in x])
    h2 = 0.5 * h
    x2 = [xi + h2 * ki for xi, ki in zip(x, k1)]
    k2 = field(x2, u)
    x3 = [xi + h2 * ki for xi, ki in zip(x, k2)]
    k3 = field(x3, u)
    x4 = [xi + h * ki for xi, ki in zip(x, k3)]
    k4 = field(x4, u)
    if not _finite(k4):
        raise NumericsError("non-finite derivative in RK4 stage 4", state=[value(v) for v in x])
    h6 = h / 6.0
    return [
        xi + h6 * (a + 2.0 * (b + c) + d)
        for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
    ]
