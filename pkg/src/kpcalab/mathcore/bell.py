"""Gaussian bell-curve weight used to gate the kernel-deviation penalty."""

from __future__ import annotations

from dataclasses import dataclass

from . import dual as dm

__all__ = ["BellParams", "bell"]


@dataclass(frozen=True)
class BellParams:
    """Peak ``kappa_p`` and width ``kappa_w`` of the bell curve.

    ``kappa_p == 0`` is the explicit "kernel term off" configuration; the
    width must be strictly positive.
    """

    kappa_p: float
    kappa_w: float

    def __post_init__(self):
        if self.kappa_p < 0.0:
            raise ValueError(f"kappa_p must be >= 0, got {self.kappa_p}")
        if self.kappa_w <= 0.0:
            raise ValueError(f"kappa_w must be > 0, got {self.kappa_w}")


def bell(x, p: BellParams):
    """``kappa_p * exp(-x**2 / kappa_w)``: peak at 0, symmetric, bounded by the peak."""
    return p.kappa_p * dm.exp(-(x * x) / p.kappa_w)
