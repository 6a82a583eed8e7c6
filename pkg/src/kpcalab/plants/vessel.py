"""Surface vessel driven by two azimuthal thrusters.

Planar 3-DOF rigid body (position and heading) with steerable propellers
mounted at ``[ell_x, +/- ell_y]``.  Forces act in the world frame through
``theta_i + alpha_v``; the yaw torque uses the body-frame thrust components.
With the thrusters opposed (``theta_1 - theta_2 = pi``) and equal thrusts,
force and torque cancel exactly: the kernel family
``[pi/2 + n*pi, -pi/2 + n*pi, gamma_1, gamma_2]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..mathcore import dual as dm
from .base import InputBounds, PlantModel, PlantState

__all__ = ["VesselModel", "VesselParams"]


@dataclass(frozen=True)
class VesselParams:
    m_v: float = 11000.0  # vessel mass [kg]
    I_v: float = 36062.0  # vessel yaw inertia [kg m^2]
    I_p: float = 700.0  # propeller steering inertia [kg m^2]
    ell_x: float = -2.75  # longitudinal mounting offset [m]
    ell_y: float = 0.894  # lateral mounting offset [m]

    def __post_init__(self):
        if self.m_v <= 0 or self.I_v <= 0 or self.I_p <= 0:
            raise ValueError("m_v, I_v, I_p must be strictly positive")
        if self.ell_y < 0:
            raise ValueError("ell_y must be nonnegative")


class VesselModel(PlantModel):
    """``x1 = [x_v, y_v, alpha_v, xdot, ydot, alphadot]``, ``x2 = [th1, th2, th1d, th2d]``."""

    name = "vessel"
    x2_pos_dim = 2
    angular_x2 = (True, True)
    kernel_free_dim = 2
    ref_dim = 3

    def __init__(self, params: VesselParams = VesselParams(), bounds: InputBounds | None = None):
        if bounds is None:
            bounds = InputBounds(
                [0.0, 0.0, -1325.0, -1325.0], [12400.0, 12400.0, 1325.0, 1325.0]
            )
        super().__init__(n1=6, n2=4, m1=2, m2=2, m_eff=3, bounds=bounds)
        self.params = params
        self.x2_pos_bounds = np.array([[-math.pi, math.pi], [-math.pi, math.pi]])

    def _wrench(self, x1, x2, u1):
        p = self.params
        alpha = x1[2]
        th1, th2 = x2[0], x2[1]
        t1, t2 = u1[0], u1[1]
        fx = t1 * dm.cos(th1 + alpha) + t2 * dm.cos(th2 + alpha)
        fy = t1 * dm.sin(th1 + alpha) + t2 * dm.sin(th2 + alpha)
        tz = p.ell_y * (t1 * dm.cos(th1) - t2 * dm.cos(th2)) - p.ell_x * (
            t1 * dm.sin(th1) + t2 * dm.sin(th2)
        )
        return fx, fy, tz

    def f1(self, x1, x2, u1):
        p = self.params
        fx, fy, tz = self._wrench(x1, x2, u1)
        return [x1[3], x1[4], x1[5], fx / p.m_v, fy / p.m_v, tz / p.I_v]

    def f2(self, x2, u2):
        ip = self.params.I_p
        return [x2[2], x2[3], u2[0] / ip, u2[1] / ip]

    def psi(self, x1, x2, u1):
        fx, fy, tz = self._wrench(x1, x2, u1)
        return [fx, fy, tz]

    def kernel(self, x1, branch, free):
        off = branch * math.pi
        return [0.5 * math.pi + off, -0.5 * math.pi + off, free[0], free[1]]

    def kernel_input_map(self) -> np.ndarray:
        # kernel equilibria require equal thrusts: command the pair jointly
        return np.array(
            [
                [1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
            ]
        )

    def validate_state(self, state: PlantState) -> None:
        th = state.x2[:2]
        if np.any(np.abs(th) > math.pi + 1e-12):
            raise ValueError("initial propeller angles must lie in [-pi, pi]")

    def channel_names(self):
        return [
            "x_v",
            "y_v",
            "alpha_v",
            "xdot_v",
            "ydot_v",
            "alphadot_v",
            "theta1",
            "theta2",
            "theta1_dot",
            "theta2_dot",
        ]
