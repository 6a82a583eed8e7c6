"""Forward-mode derivative propagation with dual scalars.

A :class:`Dual` carries a value and a numpy vector of partial derivatives,
one entry per active seed direction.  All seed directions are propagated in
a single evaluation pass, which keeps gradient evaluation a constant factor
over a plain float pass for the decision-vector sizes used here (< 40).

The module-level functions (:func:`sin`, :func:`cos`, ...) dispatch on the
argument type so the same model code can be evaluated with plain floats
(fast path for simulation and line searches) or with duals (gradient path).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Dual",
    "acos",
    "asin",
    "atan",
    "atan2",
    "cos",
    "exp",
    "fabs",
    "gradient",
    "hypot2",
    "log",
    "maximum",
    "seed",
    "sin",
    "sqrt",
    "tan",
    "value",
]


class Dual:
    """Scalar value plus partials with respect to the active seed directions."""

    __slots__ = ("val", "eps")

    def __init__(self, val: float, eps: np.ndarray):
        self.val = val
        self.eps = eps

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.eps!r})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        return Dual(self.val + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        return Dual(self.val - other, self.eps)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(
                self.val * other.val,
                self.eps * other.val + other.eps * self.val,
            )
        return Dual(self.val * other, self.eps * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            val = self.val * inv
            return Dual(val, (self.eps - other.eps * val) * inv)
        inv = 1.0 / other
        return Dual(self.val * inv, self.eps * inv)

    def __rtruediv__(self, other):
        inv = 1.0 / self.val
        val = other * inv
        return Dual(val, self.eps * (-val * inv))

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if isinstance(n, int):
            if n == 2:
                return Dual(self.val * self.val, self.eps * (2.0 * self.val))
            return Dual(self.val**n, self.eps * (n * self.val ** (n - 1)))
        return exp(log(self) * n)

    def __abs__(self):
        return fabs(self)

    # -- comparisons act on values (branching in model code) -----------------

    def __lt__(self, other):
        return self.val < value(other)

    def __le__(self, other):
        return self.val <= value(other)

    def __gt__(self, other):
        return self.val > value(other)

    def __ge__(self, other):
        return self.val >= value(other)

    def __eq__(self, other):
        return self.val == value(other)

    def __ne__(self, other):
        return self.val != value(other)

    __hash__ = None  # type: ignore[assignment]

    def __float__(self):
        raise TypeError("implicit Dual -> float conversion would drop partials")


Scalar = "float | Dual"


def value(x) -> float:
    """Plain float value of a float or Dual."""
    return x.val if isinstance(x, Dual) else x


_EYE_CACHE: dict = {}


def seed(z: Sequence[float]) -> list:
    """Wrap a point into duals with one seed direction per component."""
    n = len(z)
    eye = _EYE_CACHE.get(n)
    if eye is None:
        eye = np.eye(n)
        eye.setflags(write=False)
        _EYE_CACHE[n] = eye
    return [Dual(float(z[i]), eye[i]) for i in range(n)]


def gradient(f: Callable, z: Sequence[float]) -> np.ndarray:
    """Gradient of a scalar function built from the operations in this module.

    The function is evaluated once with all seed directions active; partials
    obey the chain rule exactly, so the result matches the analytic gradient
    to rounding error.
    """
    out = f(seed(z))
    if isinstance(out, Dual):
        return np.array(out.eps, dtype=float)
    return np.zeros(len(z))


# -- elementary functions, float/dual dispatch --------------------------------


def sin(x):
    if isinstance(x, Dual):
        return Dual(math.sin(x.val), x.eps * math.cos(x.val))
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(math.cos(x.val), x.eps * -math.sin(x.val))
    return math.cos(x)


def tan(x):
    if isinstance(x, Dual):
        t = math.tan(x.val)
        return Dual(t, x.eps * (1.0 + t * t))
    return math.tan(x)


def exp(x):
    if isinstance(x, Dual):
        e = math.exp(x.val)
        return Dual(e, x.eps * e)
    return math.exp(x)


def log(x):
    if isinstance(x, Dual):
        return Dual(math.log(x.val), x.eps / x.val)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Dual):
        s = math.sqrt(x.val)
        return Dual(s, x.eps * (0.5 / s))
    return math.sqrt(x)


def atan(x):
    if isinstance(x, Dual):
        return Dual(math.atan(x.val), x.eps / (1.0 + x.val * x.val))
    return math.atan(x)


def asin(x):
    if isinstance(x, Dual):
        return Dual(math.asin(x.val), x.eps / math.sqrt(1.0 - x.val * x.val))
    return math.asin(x)


def acos(x):
    if isinstance(x, Dual):
        return Dual(math.acos(x.val), x.eps / -math.sqrt(1.0 - x.val * x.val))
    return math.acos(x)


def atan2(y, x):
    if isinstance(y, Dual) or isinstance(x, Dual):
        yv, xv = value(y), value(x)
        denom = xv * xv + yv * yv
        val = math.atan2(yv, xv)
        eps = 0.0
        if isinstance(y, Dual):
            eps = y.eps * (xv / denom)
        if isinstance(x, Dual):
            eps = eps + x.eps * (-yv / denom)
        return Dual(val, eps)
    return math.atan2(y, x)


def fabs(x):
    # derivative at 0 follows the one-sided (positive) convention
    if isinstance(x, Dual):
        s = 1.0 if x.val >= 0.0 else -1.0
        return Dual(abs(x.val), x.eps * s)
    return abs(x)


def maximum(a, b):
    """Pointwise max; ties resolve to the first argument (subgradient choice)."""
    return a if value(a) >= value(b) else b


def hypot2(xs) -> "float | Dual":
    """Sum of squares of a sequence of scalars (smooth stand-in for a norm)."""
    total = 0.0
    for x in xs:
        total = total + x * x
    return total
