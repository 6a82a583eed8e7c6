"""Analytic nonlinear continuous controllers (NCC).

Planar case: a PD law on the object angle produces the ideal effective
control; the allocated thrust angle ``beta_d = arctan(eps * u_tilde) + alpha``
is Lipschitz in the object state and keeps the thrust strictly positive.
The discontinuous generalized-inverse alternative (``theta_d = +/- pi/2`` by
the sign of the demanded torque) is provided as the baseline that cannot
stabilize the cascade.

3-D case: a geodesic force law on the sphere plus a quaternion attitude
loop.  The radial bias ``T_r > 0`` keeps the desired-attitude map Lipschitz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .mathcore import Quaternion
from .plants import PlantState, Uav2dParams, Uav3dParams
from .plants.uav3d import sphere_position, sphere_velocity

__all__ = [
    "GeodesicGains",
    "Ncc2dGains",
    "Ncc2dOutput",
    "Ncc2dController",
    "Ncc3dController",
    "OptimalMapping2dController",
    "attitude_torque",
    "desired_quaternion",
    "geodesic_force",
    "ncc2d_step",
    "optimal_mapping2d",
]


@dataclass(frozen=True)
class Ncc2dGains:
    """PD gains for the planar cascade plus the allocated-mapping slope."""

    kp_alpha: float
    kd_alpha: float
    kp_beta: float
    kd_beta: float
    epsilon: float
    alpha_d: float = math.pi / 2

    def __post_init__(self):
        for name in ("kp_alpha", "kd_alpha", "kp_beta", "kd_beta", "epsilon"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not 0.0 <= self.alpha_d <= math.pi:
            raise ValueError("alpha_d must lie in [0, pi]")


class Ncc2dOutput(NamedTuple):
    u1: float
    u2: float
    beta_d: float
    u1_tilde_d: float


def ncc2d_step(gains: Ncc2dGains, x: PlantState, params: Uav2dParams) -> Ncc2dOutput:
    """One sample of the planar thrust/attitude law.

    The thrust uses the exact simplification
    ``u_tilde / sin(arctan(eps*u_tilde)) = sqrt(1 + eps^2 u_tilde^2)/eps``,
    which removes the 0/0 at zero demanded effective control and bounds the
    thrust below by ``1/eps``.
    """
    alpha, alpha_dot = x.x1
    beta, beta_dot = x.x2
    u_tilde = (
        gains.kp_alpha * (gains.alpha_d - alpha)
        - gains.kd_alpha * alpha_dot
        + params.m_tilde * params.g * math.cos(alpha)
    )
    beta_d = math.atan(gains.epsilon * u_tilde) + alpha
    u1 = math.sqrt(1.0 + gains.epsilon**2 * u_tilde**2) / gains.epsilon
    u2 = gains.kp_beta * (beta_d - beta) - gains.kd_beta * beta_dot
    return Ncc2dOutput(u1, u2, beta_d, u_tilde)


def optimal_mapping2d(tau_alpha_d: float) -> float:
    """Generalized-inverse thrust angle: ``+pi/2`` for nonnegative demanded torque.

    Deliberately discontinuous at zero.
    """
    return math.pi / 2 if tau_alpha_d >= 0.0 else -math.pi / 2


@dataclass(frozen=True)
class GeodesicGains:
    """Geodesic position loop and quaternion attitude loop for the 3-D UAV."""

    kp_t: float
    kd_t: float
    kp_q: float
    kd_q: float
    T_r: float
    epsilon: float
    psi: float = 0.0

    def __post_init__(self):
        for name in ("kp_t", "kd_t", "kp_q", "kd_q", "T_r", "epsilon"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")


def geodesic_force(
    gains: GeodesicGains, x: PlantState, p_d: np.ndarray, params: Uav3dParams
) -> tuple:
    """Desired thrust vector on the sphere and its magnitude.

    ``dist * kp_t`` acts along the geodesic direction, ``-kd_t * p_dot``
    damps, the gravity load on the polar coordinate is compensated along
    ``phi_hat``, and ``T_r`` biases radially so the magnitude never vanishes.
    """
    ell = params.ell
    p = sphere_position(x.x1, ell)
    p_d = np.asarray(p_d, dtype=float)
    if abs(np.linalg.norm(p) - ell) > 1e-6:
        raise ValueError("position is not on the sphere of radius ell")

    inner = float(np.clip(p @ p_d / ell**2, -1.0, 1.0))
    dist = ell * math.acos(inner)
    cross = np.cross(np.cross(p, p_d), p)
    t_hat = cross / max(float(np.linalg.norm(cross)), gains.epsilon)

    phi, theta = float(x.x1[0]), float(x.x1[1])
    phi_hat = np.array(
        [
            -math.cos(theta) * math.sin(phi),
            -math.sin(phi) * math.sin(theta),
            math.cos(phi),
        ]
    )
    gravity = params.g * ell * math.cos(phi) * (params.m_o / 2.0 + params.m_u)
    t_vec = (
        dist * gains.kp_t * t_hat
        - gains.kd_t * sphere_velocity(x.x1, ell)
        + gravity * phi_hat
        + gains.T_r * (p / ell)
    )
    return t_vec, float(np.linalg.norm(t_vec))


def desired_quaternion(t_d_vec: np.ndarray, psi: float) -> Quaternion:
    """Attitude aligning the body thrust axis with the desired thrust vector.

    A tilt about the horizontal axis perpendicular to the force composes with
    the yaw quaternion.  Raises on a zero force vector.
    """
    t_d_vec = np.asarray(t_d_vec, dtype=float)
    norm = float(np.linalg.norm(t_d_vec))
    if norm <= 0.0:
        raise ValueError("zero desired-force vector has no attitude")
    tx, ty, tz = t_d_vec
    hyp = math.hypot(tx, ty)
    zeta = math.atan2(hyp, tz)
    if hyp > 1e-14 * norm:
        axis = np.array([-ty, tx, 0.0]) / hyp
        q_zeta = Quaternion(math.cos(0.5 * zeta), math.sin(0.5 * zeta) * axis)
    elif tz > 0.0:
        q_zeta = Quaternion.identity()
    else:
        # antipodal: tilt by pi about the y-axis (deterministic convention)
        q_zeta = Quaternion(0.0, np.array([0.0, 1.0, 0.0]))
    q_psi = Quaternion(math.cos(0.5 * psi), np.array([0.0, 0.0, math.sin(0.5 * psi)]))
    return q_zeta * q_psi


def attitude_torque(
    gains: GeodesicGains, q: Quaternion, q_d: Quaternion, omega: np.ndarray
) -> np.ndarray:
    """Quaternion PD torque from the relative rotation ``R(q)^T R(q_d)``.

    The error quaternion is flipped to a nonnegative scalar part (short
    rotation) before use.
    """
    q_err = q.conjugate() * q_d
    if q_err.w < 0.0:
        q_err = Quaternion(-q_err.w, -q_err.v)
    return gains.kp_q * q_err.v - gains.kd_q * np.asarray(omega, dtype=float)


# -- controller wrappers for the simulation harness ---------------------------


class Ncc2dController:
    """Zero-order-hold sampling of the continuous planar law."""

    def __init__(self, gains: Ncc2dGains, params: Uav2dParams):
        self.gains = gains
        self.params = params

    def step(self, t: float, x: PlantState, ref: np.ndarray):
        gains = replace(self.gains, alpha_d=float(np.atleast_1d(ref)[0]))
        out = ncc2d_step(gains, x, self.params)
        return np.array([out.u1, out.u2]), np.array([out.beta_d, 0.0]), None


class OptimalMapping2dController:
    """Same outer loop, but allocated through the discontinuous sign mapping."""

    def __init__(self, gains: Ncc2dGains, params: Uav2dParams):
        self.gains = gains
        self.params = params

    def step(self, t: float, x: PlantState, ref: np.ndarray):
        gains = replace(self.gains, alpha_d=float(np.atleast_1d(ref)[0]))
        alpha, alpha_dot = x.x1
        beta, beta_dot = x.x2
        u_tilde = (
            gains.kp_alpha * (gains.alpha_d - alpha)
            - gains.kd_alpha * alpha_dot
            + self.params.m_tilde * self.params.g * math.cos(alpha)
        )
        theta_d = optimal_mapping2d(self.params.ell * u_tilde)
        beta_d = alpha + theta_d
        u1 = abs(u_tilde)  # demanded torque matched exactly: T = u_tilde / sin(theta_d)
        u2 = gains.kp_beta * (beta_d - beta) - gains.kd_beta * beta_dot
        return np.array([u1, u2]), np.array([beta_d, 0.0]), None


class Ncc3dController:
    """Geodesic position loop + quaternion attitude loop."""

    def __init__(self, gains: GeodesicGains, params: Uav3dParams):
        self.gains = gains
        self.params = params

    def step(self, t: float, x: PlantState, ref: np.ndarray):
        phi_d, theta_d = float(ref[0]), float(ref[1])
        p_d = sphere_position([phi_d, theta_d], self.params.ell)
        t_vec, thrust = geodesic_force(self.gains, x, p_d, self.params)
        q_d = desired_quaternion(t_vec, self.gains.psi)
        q = Quaternion(x.x2[0], x.x2[1:4]).normalize()
        tau = attitude_torque(self.gains, q, q_d, x.x2[4:7])
        u = np.concatenate([[thrust], tau])
        x2d = np.concatenate([q_d.as_array(), np.zeros(3)])
        return u, x2d, None
