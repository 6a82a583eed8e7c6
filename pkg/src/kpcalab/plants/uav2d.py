"""Planar UAV manipulating a hinged object.

The object is pinned to the ground; the UAV sits at the free end and steers
its thrust direction.  With ``alpha`` the object angle and ``beta`` the
thrust angle (both from the horizontal):

    I_tilde * alpha_dd + m_tilde * ell * g * cos(alpha) = T * ell * sin(beta - alpha)
    I_u * beta_dd = tau

so S1 sees the actuators only through the effective control
``T * sin(beta - alpha)``, which vanishes whenever the thrust is aligned
with the object - the kernel family ``[alpha + n*pi, gamma]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..mathcore import dual as dm
from .base import InputBounds, PlantModel, PlantState

__all__ = ["Uav2dModel", "Uav2dParams"]


@dataclass(frozen=True)
class Uav2dParams:
    """Masses, inertias, and geometry; derived quantities are recomputed on use."""

    m_u: float = 0.1  # UAV mass [kg]
    I_u: float = 1.014  # UAV inertia [kg m^2]
    m_o: float = 0.03  # object mass [kg]
    I_o: float = 2.0  # object inertia [kg m^2]
    ell: float = 1.25  # object length [m]
    g: float = 9.81  # gravity [m/s^2]

    def __post_init__(self):
        for name in ("m_u", "I_u", "m_o", "I_o", "ell", "g"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def I_tilde(self) -> float:
        return self.m_o * self.ell**2 / 4.0 + self.I_o + self.m_u * self.ell**2

    @property
    def m_tilde(self) -> float:
        return self.m_o / 2.0 + self.m_u


class Uav2dModel(PlantModel):
    """Two-state subsystems: ``x1 = [alpha, alpha_dot]``, ``x2 = [beta, beta_dot]``."""

    name = "uav2d"
    x2_pos_dim = 1
    angular_x2 = (True,)
    kernel_free_dim = 1
    ref_dim = 1

    def __init__(self, params: Uav2dParams = Uav2dParams(), bounds: InputBounds | None = None):
        if bounds is None:
            bounds = InputBounds([0.0, -0.2], [5.0, 0.2])
        super().__init__(n1=2, n2=2, m1=1, m2=1, m_eff=1, bounds=bounds)
        self.params = params

    def f1(self, x1, x2, u1):
        p = self.params
        accel = (
            p.ell
            * (u1[0] * dm.sin(x2[0] - x1[0]) - p.m_tilde * p.g * dm.cos(x1[0]))
            / p.I_tilde
        )
        return [x1[1], accel]

    def f2(self, x2, u2):
        return [x2[1], u2[0] / self.params.I_u]

    def psi(self, x1, x2, u1):
        return [u1[0] * dm.sin(x2[0] - x1[0])]

    def kernel(self, x1, branch, free):
        return [x1[0] + branch * math.pi, free[0]]

    def energy(self, state: PlantState) -> float:
        """Mechanical energy of the object subsystem (conserved when unforced)."""
        p = self.params
        return 0.5 * p.I_tilde * state.x1[1] ** 2 + p.m_tilde * p.g * p.ell * math.sin(
            state.x1[0]
        )

    def channel_names(self):
        return ["alpha", "alpha_dot", "beta", "beta_dot"]
