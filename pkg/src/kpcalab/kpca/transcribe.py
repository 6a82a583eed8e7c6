"""Direct single-shooting transcription of the receding-horizon program.

The continuous-time objective (state tracking + input-rate penalty +
bell-gated kernel-deviation penalty) is discretized on the controller grid:
the predictive model advances with one RK4 step per sample, inputs are
zero-order held, and the allocated set-point is one constant decision block
across the horizon.  The resulting finite-dimensional objective is a pure
function of the decision vector that evaluates on floats or dual scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..mathcore import dual as dm
from ..mathcore.integrate import rk4_step
from ..plants import PlantModel, PlantState
from .config import STATE_PENALTY_WEIGHT, KpcaConfig

__all__ = ["DecisionVector", "NlpProblem", "cost_gradient_check", "transcribe"]


@dataclass
class DecisionVector:
    """Input samples (zero-order hold per step) plus the free set-point block."""

    u_seq: np.ndarray  # (N, m1+m2)
    x2d_free: np.ndarray  # (len(mask),)

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.u_seq.reshape(-1), self.x2d_free])

    @staticmethod
    def unflatten(flat: np.ndarray, n_steps: int, n_inputs: int) -> "DecisionVector":
        flat = np.asarray(flat, dtype=float)
        cut = n_steps * n_inputs
        return DecisionVector(
            flat[:cut].reshape(n_steps, n_inputs).copy(), flat[cut:].copy()
        )

    @property
    def dim(self) -> int:
        return self.u_seq.size + self.x2d_free.size


@dataclass
class NlpProblem:
    """Finite-dimensional program: objective, box bounds, optional equality residual."""

    dim: int
    lower: np.ndarray
    upper: np.ndarray
    objective: Callable
    equality: Optional[Callable]
    n_steps: int
    n_inputs: int
    x2d_mask: tuple
    model: Optional[PlantModel] = None
    config: Optional[KpcaConfig] = None
    x0: Optional[np.ndarray] = None
    x1_d: Optional[np.ndarray] = None
    u_prev: Optional[np.ndarray] = None


def transcribe(
    config: KpcaConfig,
    model: PlantModel,
    x0: PlantState,
    x1_d: np.ndarray,
    u_prev: np.ndarray,
) -> NlpProblem:
    """Build the program solved at one controller sample.

    The objective accumulates, for each horizon step ``k`` with pre-step
    state ``x_k``:

    * ``ts * (x_k - x_d)' Q (x_k - x_d)`` with ``x_d = [x1_d; x2_d]``,
    * ``ts * (du_k/ts)' R (du_k/ts)`` with ``du_k = u_k - u_(k-1)``,
    * the kernel-deviation penalty weighted per ``kernel_mode``, where the
      bell argument is the predicted effective control at step ``k`` (or the
      configured override), and
    * a soft quadratic penalty on predicted-state box violations when the
      model carries state bounds.
    """
    n1, n2 = model.n1, model.n2
    m = model.m1 + model.m2
    n_steps = config.horizon
    mask = config.x2d_mask
    ts = config.ts
    if len(config.q_weights) != n1 + n2:
        raise ValueError("Q weight length must be n1 + n2")
    if len(config.r_weights) != m:
        raise ValueError("R weight length must be m1 + m2")
    u_prev = np.asarray(u_prev, dtype=float)
    x1_d = np.asarray(x1_d, dtype=float)
    x0_list = [float(v) for v in x0.stacked()]
    template = model.default_x2d()

    q_ts = [ts * w for w in config.q_weights]
    r_ts = [w / ts for w in config.r_weights]
    kp = config.bell.kappa_p
    kw = config.bell.kappa_w
    mode = config.kernel_mode
    kernel_on = mode != "off" and kp > 0.0
    free = (
        config.kernel_free
        if config.kernel_free is not None
        else np.zeros(model.kernel_free_dim)
    )
    free_list = [float(v) for v in free]
    branch = config.kernel_branch
    hook = config.ideal_effective_control
    pos_bounds = model.x2_pos_bounds
    m1 = model.m1

    def objective(zs):
        x2d = [float(v) for v in template]
        base = n_steps * m
        for j, idx in enumerate(mask):
            x2d[idx] = zs[base + j]
        xd = [float(v) for v in x1_d] + x2d
        x = list(x0_list)
        uprev = [float(v) for v in u_prev]
        total = 0.0
        for k in range(n_steps):
            uk = zs[k * m : (k + 1) * m]
            for i in range(n1 + n2):
                w = q_ts[i]
                if w != 0.0:
                    e = x[i] - xd[i]
                    total = total + w * (e * e)
            for j in range(m):
                w = r_ts[j]
                if w != 0.0:
                    du = uk[j] - uprev[j]
                    total = total + w * (du * du)
            if kernel_on:
                x1k, x2k = x[:n1], x[n1:]
                if mode == "bell":
                    if hook is not None:
                        eff = hook(x1k, x2d)
                    else:
                        eff = model.psi(x1k, x2k, uk[:m1])
                    weight = kp * dm.exp(-dm.hypot2(eff) / kw)
                else:
                    weight = kp
                kpt = model.kernel(x1k, branch, free_list)
                dist2 = 0.0
                for a, b in zip(x2d, kpt):
                    d = a - b
                    dist2 = dist2 + d * d
                total = total + (ts * weight) * dist2
            if pos_bounds is not None:
                for i, (lo_i, hi_i) in enumerate(pos_bounds):
                    v = x[n1 + i]
                    over = dm.maximum(0.0, v - hi_i)
                    under = dm.maximum(0.0, lo_i - v)
                    total = total + (ts * STATE_PENALTY_WEIGHT) * (
                        over * over + under * under
                    )
            if k < n_steps - 1:
                x = rk4_step(model.field, x, uk, ts)
            uprev = uk
        return total

    equality = None
    if config.equality == "unit_quaternion":
        base = n_steps * m

        def equality(zs):  # noqa: F811 - deliberate rebind
            return dm.sqrt(dm.hypot2(zs[base : base + len(mask)])) - 1.0

    lower = np.tile(model.bounds.lower, n_steps).astype(float)
    upper = np.tile(model.bounds.upper, n_steps).astype(float)
    lo_free = np.full(len(mask), -np.inf)
    hi_free = np.full(len(mask), np.inf)
    if pos_bounds is not None:
        for j, idx in enumerate(mask):
            if idx < len(pos_bounds):
                lo_free[j], hi_free[j] = pos_bounds[idx]
    return NlpProblem(
        dim=n_steps * m + len(mask),
        lower=np.concatenate([lower, lo_free]),
        upper=np.concatenate([upper, hi_free]),
        objective=objective,
        equality=equality,
        n_steps=n_steps,
        n_inputs=m,
        x2d_mask=mask,
        model=model,
        config=config,
        x0=x0.stacked(),
        x1_d=x1_d,
        u_prev=u_prev,
    )


def cost_gradient_check(problem: NlpProblem, z: np.ndarray) -> float:
    """Max relative deviation between the dual-number gradient and central differences.

    Steps are relative (``1e-6 * max(1, |z_i|)``); the per-component error is
    normalized by ``max(1, |g_ad|, |g_fd|)``.
    """
    z = np.asarray(z, dtype=float)
    g_ad = dm.gradient(problem.objective, z)
    worst = 0.0
    for i in range(z.size):
        h = 1e-6 * max(1.0, abs(z[i]))
        zp, zm = z.copy(), z.copy()
        zp[i] += h
        zm[i] -= h
        fd = (
            dm.value(problem.objective(list(zp))) - dm.value(problem.objective(list(zm)))
        ) / (2.0 * h)
        rel = abs(g_ad[i] - fd) / max(1.0, abs(g_ad[i]), abs(fd))
        worst = max(worst, rel)
    return worst
