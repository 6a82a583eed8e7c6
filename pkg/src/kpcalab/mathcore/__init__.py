"""Shared numerical kernel: dual-number AD, quaternion algebra, RK4, bell curve."""

from .bell import BellParams, bell
from .dual import Dual, gradient, seed, value
from .integrate import NumericsError, rk4_step
from .quaternion import (
    Quaternion,
    quat_to_rotation,
    rotation_entries,
    rotation_to_quat,
    skew,
)

__all__ = [
    "BellParams",
    "Dual",
    "NumericsError",
    "Quaternion",
    "bell",
    "gradient",
    "quat_to_rotation",
    "rk4_step",
    "rotation_entries",
    "rotation_to_quat",
    "seed",
    "skew",
    "value",
]
