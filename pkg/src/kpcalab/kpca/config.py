"""Configuration records for the predictive allocator and its embedded solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from ..mathcore import BellParams
from ..plants import InputBounds

__all__ = ["KpcaConfig", "SolverOptions"]

KERNEL_MODES = ("off", "constant", "bell")
EQUALITY_KINDS = ("none", "unit_quaternion")

#: weight of the soft quadratic penalty on predicted-state box violations
STATE_PENALTY_WEIGHT = 1e4


@dataclass(frozen=True)
class KpcaConfig:
    """Receding-horizon program definition.

    ``q_weights`` penalizes the stacked state against ``[x1_d; x2_d]`` where
    the components of ``x2_d`` selected by ``x2d_mask`` are decision
    variables (the allocated set-point) and the rest stay at the model
    template.  ``r_weights`` penalizes the input rate.  The kernel term
    weights the squared distance of ``x2_d`` to the kernel family, gated by
    ``kernel_mode``:

    * ``off``       - no kernel term (requires ``kappa_p == 0``),
    * ``constant``  - constant weight ``kappa_p``,
    * ``bell``      - ``kappa_p * exp(-|effective control|^2 / kappa_w)``.
    """

    q_weights: np.ndarray
    r_weights: np.ndarray
    bell: BellParams
    ts: float
    horizon: int
    bounds: InputBounds
    kernel_mode: str = "bell"
    kernel_branch: int = 0
    kernel_free: Optional[np.ndarray] = None
    x2d_mask: Tuple[int, ...] = ()
    equality: str = "none"
    max_iter: int = 40
    mu_min: float = 0.1
    #: optional override for the bell argument: callable (x1, x2d) -> sequence
    ideal_effective_control: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, "q_weights", np.asarray(self.q_weights, dtype=float))
        object.__setattr__(self, "r_weights", np.asarray(self.r_weights, dtype=float))
        object.__setattr__(self, "x2d_mask", tuple(int(i) for i in self.x2d_mask))
        if self.kernel_free is not None:
            object.__setattr__(
                self, "kernel_free", np.asarray(self.kernel_free, dtype=float)
            )
        if np.any(self.q_weights < 0) or np.any(self.r_weights < 0):
            raise ValueError("Q and R weights must be nonnegative")
        if self.ts <= 0.0:
            raise ValueError("ts must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.kernel_mode not in KERNEL_MODES:
            raise ValueError(f"kernel_mode must be one of {KERNEL_MODES}")
        if self.equality not in EQUALITY_KINDS:
            raise ValueError(f"equality must be one of {EQUALITY_KINDS}")
        if self.kernel_mode == "off" and self.bell.kappa_p != 0.0:
            raise ValueError("kernel_mode 'off' requires kappa_p == 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.mu_min <= 0.0:
            raise ValueError("mu_min must be positive")


@dataclass(frozen=True)
class SolverOptions:
    """Iteration cap, barrier floor, and warm-start switches for the solver."""

    max_iter: int = 40
    mu_min: float = 0.1
    mu_init: float = 1.0
    tol_kkt: float = 1e-6
    warm_start: bool = True
    penalty_eq: float = 1e3

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not 0.0 < self.mu_min <= self.mu_init:
            raise ValueError("need 0 < mu_min <= mu_init")
        if self.tol_kkt <= 0.0 or self.penalty_eq <= 0.0:
            raise ValueError("tol_kkt and penalty_eq must be positive")
