"""Receding-horizon controller: transcribe, solve, apply the first input.

The warm-start store shifts the previous input plan by one step (duplicating
the last sample) and keeps the previous allocated set-point and equality
multiplier.  A solve that fails numerically is absorbed by re-applying the
previous input, so logs stay complete.
"""

from __future__ import annotations

import numpy as np

from ..mathcore import dual as dm
from ..plants import PlantModel, PlantState
from .config import KpcaConfig, SolverOptions
from .solver import NlpSolution, solve
from .transcribe import DecisionVector, transcribe

__all__ = ["KpcaController"]


class KpcaController:
    def __init__(
        self,
        model: PlantModel,
        config: KpcaConfig,
        options: SolverOptions | None = None,
    ):
        self.model = model
        self.config = config
        self.options = options or SolverOptions(
            max_iter=config.max_iter, mu_min=config.mu_min
        )
        self.u_prev: np.ndarray | None = None
        self._plan: DecisionVector | None = None
        self._lam = 0.0
        self._curvature: np.ndarray | None = None

    def reset(self) -> None:
        self.u_prev = None
        self._plan = None
        self._lam = 0.0
        self._curvature = None

    def _initial_plan(self, x: PlantState) -> DecisionVector:
        u_seq = np.tile(self.u_prev, (self.config.horizon, 1))
        free = (
            self.config.kernel_free
            if self.config.kernel_free is not None
            else np.zeros(self.model.kernel_free_dim)
        )
        anchor = self.model.kernel_point(x.x1, self.config.kernel_branch, free)
        x2d_free = np.array([anchor[i] for i in self.config.x2d_mask])
        return DecisionVector(u_seq, x2d_free)

    def _shifted_plan(self) -> DecisionVector:
        u = self._plan.u_seq
        return DecisionVector(np.vstack([u[1:], u[-1:]]), self._plan.x2d_free.copy())

    def step(self, t: float, x: PlantState, ref: np.ndarray):
        """Solve the horizon program at ``x`` and apply its first input sample."""
        cfg = self.config
        model = self.model
        if self.u_prev is None:
            self.u_prev = model.bounds.mid.copy()
        if self._plan is None or not self.options.warm_start:
            init = self._initial_plan(x)
        else:
            init = self._shifted_plan()

        x1_d = model.expand_ref(ref)
        problem = transcribe(cfg, model, x, x1_d, self.u_prev)
        curvature = self._curvature if self.options.warm_start else None
        sol = solve(
            problem, init.flatten(), self.options, eq_multiplier=self._lam, curvature=curvature
        )
        if sol.status != "numeric_failure":
            self._curvature = sol.curvature

        if sol.status == "numeric_failure":
            # fail-operational: hold the previous input, keep the old plan
            x2d = self._x2d_full(init.x2d_free)
            return self.u_prev.copy(), x2d, sol

        plan = DecisionVector.unflatten(sol.z_star, cfg.horizon, problem.n_inputs)
        if cfg.equality == "unit_quaternion":
            # retract onto the constraint manifold so the returned set-point
            # is exactly unit norm; the augmented Lagrangian already kept the
            # residual small, so the cost change is second order
            norm = float(np.linalg.norm(plan.x2d_free))
            if norm > 0.0:
                plan.x2d_free /= norm
                z_flat = plan.flatten()
                cost = dm.value(problem.objective([float(v) for v in z_flat]))
                sol = NlpSolution(
                    z_flat,
                    cost,
                    sol.iterations,
                    sol.kkt_residual,
                    sol.status,
                    sol.eq_multiplier,
                    0.0,
                )
        u_applied = plan.u_seq[0].copy()
        self._plan = plan
        self._lam = sol.eq_multiplier
        self.u_prev = u_applied
        return u_applied, self._x2d_full(plan.x2d_free), sol

    def _x2d_full(self, x2d_free: np.ndarray) -> np.ndarray:
        x2d = self.model.default_x2d()
        for j, idx in enumerate(self.config.x2d_mask):
            x2d[idx] = x2d_free[j]
        return x2d
