"""Quaternion and rotation algebra.

Conventions used throughout the package:

* scalar-first storage ``(w, v) = (q0, qv)``,
* Hamilton product, so ``R(a * b) = R(a) R(b)``,
* ``R(q)`` maps body coordinates to world coordinates,
* body angular velocity propagates as ``q_dot = 0.5 * q * (0, omega)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Quaternion",
    "quat_to_rotation",
    "rotation_entries",
    "rotation_to_quat",
    "skew",
]

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    """Unit-norm rotation parameterization with scalar part ``w`` and vector part ``v``."""

    w: float
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float).reshape(3))

    @staticmethod
    def identity() -> "Quaternion":
        return Quaternion(1.0, np.zeros(3))

    @staticmethod
    def from_array(q) -> "Quaternion":
        q = np.asarray(q, dtype=float).reshape(4)
        return Quaternion(float(q[0]), q[1:].copy())

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.w], self.v))

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + float(self.v @ self.v))

    def normalize(self) -> "Quaternion":
        """Unit-norm copy; the zero quaternion is rejected."""
        n = self.norm()
        if n < 1e-300:
            raise ValueError("cannot normalize a zero quaternion")
        return Quaternion(self.w / n, self.v / n)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.v)

    def multiply(self, other: "Quaternion") -> "Quaternion":
        """Hamilton product ``self * other``."""
        w = self.w * other.w - float(self.v @ other.v)
        v = self.w * other.v + other.w * self.v + np.cross(self.v, other.v)
        return Quaternion(w, v)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return self.multiply(other)

    def rotate(self, vec) -> np.ndarray:
        """Apply the body-to-world rotation to a 3-vector."""
        return quat_to_rotation(self) @ np.asarray(vec, dtype=float)


def rotation_entries(w, x, y, z):
    """Row-major 3x3 rotation entries from quaternion components.

    Works on floats and duals alike; performs no normalization or checks.
    """
    xx, yy, zz = x * x, y * y, z * z
    wx, wy, wz = w * x, w * y, w * z
    xy, xz, yz = x * y, x * z, y * z
    return (
        1.0 - 2.0 * (yy + zz),
        2.0 * (xy - wz),
        2.0 * (xz + wy),
        2.0 * (xy + wz),
        1.0 - 2.0 * (xx + zz),
        2.0 * (yz - wx),
        2.0 * (xz - wy),
        2.0 * (yz + wx),
        1.0 - 2.0 * (xx + yy),
    )


def quat_to_rotation(q: Quaternion) -> np.ndarray:
    """Rotation matrix of a unit quaternion (Euler-Rodrigues map).

    Raises ``ValueError`` when the quaternion norm deviates from one by more
    than 1e-9.
    """
    if abs(q.norm() - 1.0) > _UNIT_TOL:
        raise ValueError(f"quaternion norm {q.norm()!r} is not 1 within {_UNIT_TOL}")
    return np.array(rotation_entries(q.w, q.v[0], q.v[1], q.v[2])).reshape(3, 3)


def rotation_to_quat(rot: np.ndarray) -> Quaternion:
    """Quaternion of a rotation matrix (inverse Euler-Rodrigues map).

    Uses the Shepperd-style branch on the largest of trace and diagonal
    entries to avoid cancellation; the sign is fixed so the scalar part is
    nonnegative.
    """
    rot = np.asarray(rot, dtype=float)
    t = rot[0, 0] + rot[1, 1] + rot[2, 2]
    choice = int(np.argmax([t, rot[0, 0], rot[1, 1], rot[2, 2]]))
    if choice == 0:
        r = math.sqrt(1.0 + t)
        s = 0.5 / r
        w = 0.5 * r
        v = np.array(
            [
                (rot[2, 1] - rot[1, 2]) * s,
                (rot[0, 2] - rot[2, 0]) * s,
                (rot[1, 0] - rot[0, 1]) * s,
            ]
        )
    else:
        i = choice - 1
        j = (i + 1) % 3
        k = (i + 2) % 3
        r = math.sqrt(1.0 + rot[i, i] - rot[j, j] - rot[k, k])
        s = 0.5 / r
        w = (rot[k, j] - rot[j, k]) * s
        v = np.zeros(3)
        v[i] = 0.5 * r
        v[j] = (rot[j, i] + rot[i, j]) * s
        v[k] = (rot[k, i] + rot[i, k]) * s
    q = Quaternion(w, v)
    if q.w < 0.0:
        q = Quaternion(-q.w, -q.v)
    return q.normalize()


def skew(v) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector: ``skew(v) @ w == cross(v, w)``."""
    v = np.asarray(v, dtype=float).reshape(3)
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )
