"""Common plant-model machinery.

Every model splits into a primary subsystem S1 (state ``x1``, input ``u1``)
and an actuator subsystem S2 (state ``x2``, input ``u2``).  S1 feels the
actuators only through the effective control ``psi(x1, x2, u1)``; the kernel
family enumerates actuator set-points that null the effective control, which
is where the linearized system loses controllability.

Dynamics evaluators work on plain scalar sequences so they run unchanged on
floats (simulation) and on dual numbers (linearization, predictive model
sensitivities).  Numpy-facing wrappers are provided for convenience.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..mathcore import dual as dm

__all__ = [
    "EquilibriumError",
    "InputBounds",
    "LinearizedSystem",
    "PlantModel",
    "PlantState",
    "SingularityError",
    "controllability_rank",
    "linearize",
]

EQUILIBRIUM_TOL = 1e-8
_RANK_REL_TOL = 1e-9


class SingularityError(ArithmeticError):
    """Mass matrix (near-)singular at the evaluated configuration."""


class EquilibriumError(ValueError):
    """Linearization requested at a point that is not an equilibrium."""

    def __init__(self, residual: float):
        super().__init__(
            f"point is not an equilibrium: |Gamma|_inf = {residual:.3e} > {EQUILIBRIUM_TOL:.0e}"
        )
        self.residual = residual


@dataclass(frozen=True)
class InputBounds:
    """Element-wise box on the stacked input ``u = [u1; u2]``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape:
            raise ValueError("bound shapes differ")
        if not np.all(lo < hi):
            raise ValueError("lower bounds must be strictly below upper bounds")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def mid(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)


@dataclass
class PlantState:
    """Partitioned state ``(x1, x2)`` of the two subsystems."""

    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        self.x1 = np.asarray(self.x1, dtype=float).copy()
        self.x2 = np.asarray(self.x2, dtype=float).copy()

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.x1, self.x2])


class PlantModel:
    """Base class bundling dimensions, evaluators, bounds, and the kernel family.

    Subclasses provide ``f1``, ``f2``, ``psi``, and ``kernel`` over scalar
    sequences.  Construction asserts the overactuation condition
    ``m1 + n2 > m_eff``.
    """

    name: str = "plant"
    #: position block of x2 (entries constrained by the kernel family)
    x2_pos_dim: int = 0
    #: which position-block components are angles (wrapped before differencing)
    angular_x2: tuple = ()
    #: number of free parameters accepted by the kernel family
    kernel_free_dim: int = 0
    #: dimension of the reference vector fed to controllers
    ref_dim: int = 0

    def __init__(self, n1: int, n2: int, m1: int, m2: int, m_eff: int, bounds: InputBounds):
        if m1 + n2 <= m_eff:
            raise ValueError(
                f"not overactuated: dim(u1) + dim(x2) = {m1 + n2} must exceed "
                f"dim(effective control) = {m_eff}"
            )
        if bounds.lower.shape != (m1 + m2,):
            raise ValueError("input bound dimension does not match m1 + m2")
        self.n1, self.n2, self.m1, self.m2, self.m_eff = n1, n2, m1, m2, m_eff
        self.bounds = bounds
        #: optional box on the x2 position block (None entries mean unconstrained)
        self.x2_pos_bounds: Optional[np.ndarray] = None

    # -- scalar-generic evaluators (override in subclasses) -------------------

    def f1(self, x1: Sequence, x2: Sequence, u1: Sequence) -> list:
        raise NotImplementedError

    def f2(self, x2: Sequence, u2: Sequence) -> list:
        raise NotImplementedError

    def psi(self, x1: Sequence, x2: Sequence, u1: Sequence) -> list:
        raise NotImplementedError

    def kernel(self, x1: Sequence, branch: int, free: Sequence) -> list:
        raise NotImplementedError

    def field(self, x: Sequence, u: Sequence) -> list:
        """Stacked dynamics ``[f1; f2]`` over the full state and input."""
        x1, x2 = x[: self.n1], x[self.n1 :]
        u1, u2 = u[: self.m1], u[self.m1 :]
        return self.f1(x1, x2, u1) + self.f2(x2, u2)

    # -- numpy-facing conveniences --------------------------------------------

    def f1_dot(self, x1, x2, u1) -> np.ndarray:
        return np.array(self.f1(list(x1), list(x2), np.atleast_1d(u1).tolist()), dtype=float)

    def f2_dot(self, x2, u2) -> np.ndarray:
        return np.array(self.f2(list(x2), np.atleast_1d(u2).tolist()), dtype=float)

    def effective_control(self, x1, x2, u1) -> np.ndarray:
        return np.array(self.psi(list(x1), list(x2), np.atleast_1d(u1).tolist()), dtype=float)

    def kernel_point(self, x1, branch: int = 0, free=None) -> np.ndarray:
        if free is None:
            free = np.zeros(self.kernel_free_dim)
        free = np.atleast_1d(np.asarray(free, dtype=float))
        if free.shape != (self.kernel_free_dim,):
            raise ValueError(
                f"kernel family for {self.name} takes {self.kernel_free_dim} free "
                f"parameters, got {free.shape[0]}"
            )
        if branch != int(branch):
            raise ValueError("kernel branch must be an integer")
        return np.array(self.kernel(list(x1), int(branch), free.tolist()), dtype=float)

    # -- state handling --------------------------------------------------------

    def make_state(self, x1, x2) -> PlantState:
        state = PlantState(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
        if state.x1.shape != (self.n1,) or state.x2.shape != (self.n2,):
            raise ValueError(
                f"state dimensions {state.x1.shape}, {state.x2.shape} do not match "
                f"({self.n1},), ({self.n2},)"
            )
        self.validate_state(state)
        return state

    def split(self, x: np.ndarray) -> PlantState:
        x = np.asarray(x, dtype=float)
        return PlantState(x[: self.n1], x[self.n1 :])

    def validate_state(self, state: PlantState) -> None:
        """Model-specific state invariants; default accepts everything."""

    def normalize_state(self, x: np.ndarray) -> np.ndarray:
        """Post-integration state cleanup (quaternion renormalization for the 3-D model)."""
        return x

    def expand_ref(self, ref) -> np.ndarray:
        """Position reference -> full desired ``x1`` (velocities zero)."""
        ref = np.atleast_1d(np.asarray(ref, dtype=float))
        if ref.shape != (self.ref_dim,):
            raise ValueError(f"reference for {self.name} has dimension {self.ref_dim}")
        out = np.zeros(self.n1)
        out[: self.ref_dim] = ref
        return out

    def channel_names(self) -> list:
        raise NotImplementedError

    def default_x2d(self) -> np.ndarray:
        """Template for the allocated set-point; decision components overwrite it."""
        return np.zeros(self.n2)

    def kernel_input_map(self) -> np.ndarray:
        """Input directions admissible at kernel-consistent equilibria.

        Columns map reduced commands to the full input vector.  The default is
        the identity; the vessel overrides it because its kernel family only
        admits equal thrusts, so the controllability analysis at the singular
        equilibrium commands the thrust pair jointly.
        """
        return np.eye(self.m1 + self.m2)


@dataclass(frozen=True)
class LinearizedSystem:
    """First-order model ``d/dt (x - x_bar) = A (x - x_bar) + B (u - u_bar)``."""

    a: np.ndarray
    b: np.ndarray
    x_bar: np.ndarray
    u_bar: np.ndarray


def linearize(model: PlantModel, x_bar, u_bar) -> LinearizedSystem:
    """Jacobians of the stacked dynamics at a verified equilibrium.

    Raises :class:`EquilibriumError` when the dynamics residual exceeds the
    equilibrium tolerance.
    """
    x_bar = np.asarray(x_bar, dtype=float)
    u_bar = np.asarray(u_bar, dtype=float)
    resid = np.max(np.abs(model.field(x_bar.tolist(), u_bar.tolist())))
    if resid > EQUILIBRIUM_TOL:
        raise EquilibriumError(float(resid))

    n = x_bar.size
    m = u_bar.size
    zs = dm.seed(np.concatenate([x_bar, u_bar]))
    out = model.field(zs[:n], zs[n:])
    jac = np.zeros((n, n + m))
    for i, row in enumerate(out):
        if isinstance(row, dm.Dual):
            jac[i] = row.eps
    return LinearizedSystem(jac[:, :n].copy(), jac[:, n:].copy(), x_bar, u_bar)


def restrict_inputs(lin: LinearizedSystem, directions: np.ndarray) -> LinearizedSystem:
    """Linearized system driven only through the given input directions."""
    return LinearizedSystem(lin.a, lin.b @ np.asarray(directions, dtype=float), lin.x_bar, lin.u_bar)


def controllability_rank(lin: LinearizedSystem) -> int:
    """Numerical rank of ``[B, AB, ..., A^(n-1) B]``.

    Rows are equilibrated to unit max-norm before the SVD (state coordinates
    across the models span several orders of magnitude) and singular values
    below ``sigma_max * 1e-9`` count as zero.  Unreachable state combinations
    show up as singular values at rounding level, so the threshold is
    forgiving.
    """
    a, b = lin.a, lin.b
    n = a.shape[0]
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    ctrb = np.hstack(blocks)
    scale = np.max(np.abs(ctrb), axis=1, keepdims=True)
    scale[scale == 0.0] = 1.0
    sv = np.linalg.svd(ctrb / scale, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > sv[0] * _RANK_REL_TOL))
