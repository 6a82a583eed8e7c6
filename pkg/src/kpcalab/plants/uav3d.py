"""UAV manipulating a hinged object in three dimensions.

The object pivots about a ground joint; its tip (where the UAV attaches)
moves on a sphere of radius ``ell`` parameterized by polar angle ``phi``
(elevation from the horizontal) and azimuth ``theta``:

    p = ell * [cos(phi) cos(theta), cos(phi) sin(theta), sin(phi)]

S1 is the Lagrangian dynamics of ``q = [phi, theta]`` driven by the
projection of the UAV thrust onto the local ``(phi_hat, theta_hat)``
directions; S2 is the UAV rigid-body attitude (quaternion + body rates).
The effective control vanishes exactly when the thrust is radial, giving a
one-parameter-per-branch family of kernel attitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..mathcore import dual as dm
from ..mathcore.quaternion import rotation_entries
from .base import InputBounds, PlantModel, PlantState, SingularityError

__all__ = ["Uav3dModel", "Uav3dParams", "sphere_position", "sphere_velocity"]

_QUAT_STATE_TOL = 1e-9
_COND_LIMIT = 1e12


def sphere_position(x1, ell: float) -> np.ndarray:
    """Point on the sphere of radius ``ell`` at polar/azimuth ``(x1[0], x1[1])``."""
    phi, theta = float(x1[0]), float(x1[1])
    return ell * np.array(
        [math.cos(phi) * math.cos(theta), math.cos(phi) * math.sin(theta), math.sin(phi)]
    )


def sphere_velocity(x1, ell: float) -> np.ndarray:
    """Analytic time derivative of :func:`sphere_position`."""
    phi, theta, phid, thd = (float(v) for v in x1)
    sphi, cphi = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    return ell * np.array(
        [
            -sphi * cth * phid - cphi * sth * thd,
            -sphi * sth * phid + cphi * cth * thd,
            cphi * phid,
        ]
    )


@dataclass(frozen=True)
class Uav3dParams:
    """Diagonal-inertia parameter set for the 3-D UAV-object pair.

    Note ``m_tilde`` uses a quarter of the object mass here, unlike the
    planar model which uses half.
    """

    m_u: float = 0.15  # UAV mass [kg]
    I_u: np.ndarray = field(default_factory=lambda: np.array([0.005, 0.005, 0.01]))
    m_o: float = 0.1  # object mass [kg]
    I_o: np.ndarray = field(default_factory=lambda: np.array([0.01, 2.0, 2.0]))
    ell: float = 3.0  # joint-to-UAV distance [m]
    g: float = 9.81

    def __post_init__(self):
        object.__setattr__(self, "I_u", np.asarray(self.I_u, dtype=float).reshape(3))
        object.__setattr__(self, "I_o", np.asarray(self.I_o, dtype=float).reshape(3))
        if self.m_u <= 0 or self.m_o <= 0 or self.ell <= 0 or self.g <= 0:
            raise ValueError("masses, length, and gravity must be strictly positive")
        if np.any(self.I_u <= 0) or np.any(self.I_o <= 0):
            raise ValueError("inertia diagonals must be strictly positive")

    @property
    def m_tilde(self) -> float:
        return self.m_o / 4.0 + self.m_u


class Uav3dModel(PlantModel):
    """``x1 = [phi, theta, phi_dot, theta_dot]``, ``x2 = [q0, qx, qy, qz, wx, wy, wz]``."""

    name = "uav3d"
    x2_pos_dim = 4
    angular_x2 = (False, False, False, False)
    kernel_free_dim = 4  # yaw angle plus the free body rate
    ref_dim = 2

    def __init__(self, params: Uav3dParams = Uav3dParams(), bounds: InputBounds | None = None):
        if bounds is None:
            bounds = InputBounds([0.0, -0.5, -0.5, -0.5], [7.0, 0.5, 0.5, 0.5])
        super().__init__(n1=4, n2=7, m1=1, m2=3, m_eff=2, bounds=bounds)
        self.params = params

    # -- dynamics ---------------------------------------------------------------

    def _generalized_force(self, x1, x2, u1):
        """Thrust projected on (phi_hat, theta_hat); shared by f1 and psi."""
        phi, theta = x1[0], x1[1]
        w, x, y, z = x2[0], x2[1], x2[2], x2[3]
        r = rotation_entries(w, x, y, z)
        t = u1[0]
        fx, fy, fz = r[2] * t, r[5] * t, r[8] * t  # world thrust = R(q) @ [0, 0, T]
        sphi, cphi = dm.sin(phi), dm.cos(phi)
        sth, cth = dm.sin(theta), dm.cos(theta)
        f_phi = -cth * sphi * fx - sphi * sth * fy + cphi * fz
        f_theta = -sth * fx + cth * fy
        return f_phi, f_theta

    def f1(self, x1, x2, u1):
        p = self.params
        phi, phid, thd = x1[0], x1[2], x1[3]
        ml2 = p.m_tilde * p.ell**2
        s2phi = dm.sin(2.0 * phi)
        cphi = dm.cos(phi)

        m11 = p.I_o[1] + 0.5 * ml2 * (1.0 - dm.cos(2.0 * phi))
        m22 = p.I_o[2] + ml2 * cphi * cphi
        hi = max(dm.value(m11), dm.value(m22))
        lo = min(dm.value(m11), dm.value(m22))
        if lo <= 0.0 or hi / lo > _COND_LIMIT:
            raise SingularityError(
                f"mass matrix ill-conditioned at phi={dm.value(phi)!r}"
            )

        half = 0.5 * ml2 * s2phi
        c_phi_row = half * phid * phid + half * thd * thd
        c_theta_row = -half * thd * phid - half * phid * thd
        g_phi = p.g * p.ell * cphi * (p.m_o / 2.0 + p.m_u)

        f_phi, f_theta = self._generalized_force(x1, x2, u1)
        return [
            phid,
            thd,
            (f_phi - c_phi_row - g_phi) / m11,
            (f_theta - c_theta_row) / m22,
        ]

    def f2(self, x2, u2):
        iu = self.params.I_u
        w, x, y, z = x2[0], x2[1], x2[2], x2[3]
        wx, wy, wz = x2[4], x2[5], x2[6]
        # quaternion kinematics: q_dot = 0.5 * q * (0, omega), body rates
        qd0 = -0.5 * (x * wx + y * wy + z * wz)
        qd1 = 0.5 * (w * wx + y * wz - z * wy)
        qd2 = 0.5 * (w * wy + z * wx - x * wz)
        qd3 = 0.5 * (w * wz + x * wy - y * wx)
        # omega_dot = I_u^-1 (-omega x (I_u omega) + tau)
        hx, hy, hz = iu[0] * wx, iu[1] * wy, iu[2] * wz
        od0 = (-(wy * hz - wz * hy) + u2[0]) / iu[0]
        od1 = (-(wz * hx - wx * hz) + u2[1]) / iu[1]
        od2 = (-(wx * hy - wy * hx) + u2[2]) / iu[2]
        return [qd0, qd1, qd2, qd3, od0, od1, od2]

    def psi(self, x1, x2, u1):
        f_phi, f_theta = self._generalized_force(x1, x2, u1)
        return [f_phi, f_theta]

    def kernel(self, x1, branch, free):
        """Attitudes whose thrust axis is radial: yaw-tilt-yaw composition.

        ``free = [psi, w0x, w0y, w0z]`` selects the free yaw and body rate.
        """
        phi, theta = x1[0], x1[1]
        psi = free[0]
        hphi = 0.5 * phi - 0.25 * math.pi + branch * 0.5 * math.pi
        hsum = 0.5 * (theta + psi)
        hdif = 0.5 * (theta - psi)
        cp, sp = dm.cos(hphi), dm.sin(hphi)
        return [
            cp * dm.cos(hsum),
            sp * dm.sin(hdif),
            -sp * dm.cos(hdif),
            cp * dm.sin(hsum),
            free[1],
            free[2],
            free[3],
        ]

    def position(self, x1) -> np.ndarray:
        """UAV position on the sphere of radius ``ell``."""
        return sphere_position(x1, self.params.ell)

    def velocity(self, x1) -> np.ndarray:
        """Analytic time derivative of :meth:`position`."""
        return sphere_velocity(x1, self.params.ell)

    def gravity_phi(self, x1) -> float:
        """Gravity load on the phi coordinate (the compensation the thrust must supply)."""
        p = self.params
        return p.g * p.ell * math.cos(float(x1[0])) * (p.m_o / 2.0 + p.m_u)

    # -- state contract -----------------------------------------------------------

    def validate_state(self, state: PlantState) -> None:
        norm = float(np.linalg.norm(state.x2[:4]))
        if abs(norm - 1.0) > _QUAT_STATE_TOL:
            raise ValueError(f"state quaternion norm {norm!r} not 1 within {_QUAT_STATE_TOL}")

    def normalize_state(self, x: np.ndarray) -> np.ndarray:
        q = x[self.n1 : self.n1 + 4]
        x[self.n1 : self.n1 + 4] = q / np.linalg.norm(q)
        return x

    def channel_names(self):
        return [
            "phi",
            "theta",
            "phi_dot",
            "theta_dot",
            "q0",
            "q1",
            "q2",
            "q3",
            "wx",
            "wy",
            "wz",
        ]
