"""Projected log-barrier solver with BFGS inner steps.

The merit function is the objective plus a log barrier on the finite box
bounds plus an augmented-Lagrangian term for the scalar equality constraint.
The outer loop shrinks the barrier parameter geometrically but never below
the configured floor, mirroring real-time interior-point practice where the
floor deliberately trades accuracy for speed; the inner loop takes damped
quasi-Newton steps with a backtracking line search, so the merit decreases
monotonically between parameter updates.  Everything is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..mathcore import dual as dm
from ..mathcore.integrate import NumericsError
from .config import SolverOptions
from .transcribe import NlpProblem

__all__ = ["NlpSolution", "solve"]

_ARMIJO = 1e-4
_BACKTRACK = 0.5
_MAX_BACKTRACKS = 30
_BOUNDARY_FRACTION = 0.995
_MU_SHRINK = 0.2
_EQ_TOL = 1e-8
_MAX_FREE_UPDATES = 60


@dataclass
class NlpSolution:
    """Solver output; ``z_star`` is always inside the box."""

    z_star: np.ndarray
    cost: float
    iterations: int
    kkt_residual: float
    status: str  # converged | iteration_cap | numeric_failure
    eq_multiplier: float = 0.0
    eq_residual: float = 0.0
    #: accumulated inverse-Hessian approximation, reusable as a warm start
    curvature: np.ndarray | None = None


def solve(
    problem: NlpProblem,
    init: np.ndarray,
    options: SolverOptions,
    eq_multiplier: float = 0.0,
    curvature: np.ndarray | None = None,
) -> NlpSolution:
    lo, hi = problem.lower, problem.upper
    fin_lo = np.isfinite(lo)
    fin_hi = np.isfinite(hi)
    has_eq = problem.equality is not None
    rho = options.penalty_eq

    span = np.where(fin_lo & fin_hi, hi - lo, 1.0)
    margin = 1e-9 * np.where(np.isfinite(span), np.maximum(span, 1e-6), 1.0)

    def project_interior(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float).copy()
        z[fin_lo] = np.maximum(z[fin_lo], (lo + margin)[fin_lo])
        z[fin_hi] = np.minimum(z[fin_hi], (hi - margin)[fin_hi])
        return z

    def f_value(z: np.ndarray) -> float:
        try:
            return dm.value(problem.objective([float(v) for v in z]))
        except (NumericsError, OverflowError, ValueError):
            return math.inf

    def c_value(z: np.ndarray) -> float:
        return dm.value(problem.equality([float(v) for v in z])) if has_eq else 0.0

    def barrier_value(z: np.ndarray, mu: float) -> float:
        total = 0.0
        if np.any(fin_lo):
            d = z[fin_lo] - lo[fin_lo]
            if np.any(d <= 0.0):
                return math.inf
            total -= float(np.sum(np.log(d)))
        if np.any(fin_hi):
            d = hi[fin_hi] - z[fin_hi]
            if np.any(d <= 0.0):
                return math.inf
            total -= float(np.sum(np.log(d)))
        return mu * total

    def merit_value(z: np.ndarray, mu: float, lam: float) -> float:
        f = f_value(z)
        if not math.isfinite(f):
            return math.inf
        c = c_value(z)
        return f + lam * c + 0.5 * rho * c * c + barrier_value(z, mu)

    def merit_gradient(z: np.ndarray, mu: float, lam: float):
        """(merit, gradient, f, c, grad_f, grad_c) in one dual pass per callable."""
        out = problem.objective(dm.seed(z))
        f = dm.value(out)
        g_f = out.eps.copy() if isinstance(out, dm.Dual) else np.zeros(z.size)
        c = 0.0
        g_c = None
        if has_eq:
            ceq = problem.equality(dm.seed(z))
            c = dm.value(ceq)
            g_c = ceq.eps.copy() if isinstance(ceq, dm.Dual) else np.zeros(z.size)
        g = g_f.copy()
        if has_eq:
            g += (lam + rho * c) * g_c
        bval = barrier_value(z, mu)
        if np.any(fin_lo):
            g[fin_lo] -= mu / (z[fin_lo] - lo[fin_lo])
        if np.any(fin_hi):
            g[fin_hi] += mu / (hi[fin_hi] - z[fin_hi])
        merit = f + lam * c + 0.5 * rho * c * c + bval
        return merit, g, f, c, g_f, g_c

    def kkt_residual(z: np.ndarray, c: float, lam_now: float, g_f: np.ndarray, g_c) -> float:
        g_al = g_f if g_c is None else g_f + (lam_now + rho * c) * g_c
        proj = np.clip(z - g_al, lo, hi)
        return max(float(np.max(np.abs(z - proj))), abs(c))

    z = project_interior(init)
    lam = float(eq_multiplier)
    mu = options.mu_init
    n = z.size
    if curvature is not None and curvature.shape == (n, n):
        h_inv = curvature.copy()
        h_scaled = True
    else:
        h_inv = np.eye(n)
        h_scaled = False
    iters = 0
    free_updates = 0
    alpha_prev = 1.0
    status = "iteration_cap"

    try:
        merit, g, f, c, g_f, g_c = merit_gradient(z, mu, lam)
    except (NumericsError, OverflowError, ValueError):
        return NlpSolution(z, math.inf, 0, math.inf, "numeric_failure", lam, 0.0)
    if not (math.isfinite(merit) and np.all(np.isfinite(g))):
        return NlpSolution(z, f, 0, math.inf, "numeric_failure", lam, c)

    while iters < options.max_iter:
        gnorm = float(np.max(np.abs(g))) if g.size else 0.0
        at_floor = mu <= options.mu_min * (1.0 + 1e-12)
        # the barrier floor bounds the achievable accuracy: never iterate the
        # inner problem past O(mu) stationarity
        tol_inner = max(options.tol_kkt, 0.1 * mu)
        if gnorm <= tol_inner:
            if at_floor and abs(c) <= _EQ_TOL:
                status = "converged"
                break
            if has_eq:
                lam += rho * c
            mu = max(_MU_SHRINK * mu, options.mu_min)
            free_updates += 1
            if free_updates > _MAX_FREE_UPDATES:
                break
            merit, g, f, c, g_f, g_c = merit_gradient(z, mu, lam)
            continue

        d = -h_inv @ g
        dg = float(d @ g)
        if not math.isfinite(dg) or dg >= -1e-14 * max(1.0, float(np.linalg.norm(d)) * gnorm):
            h_inv = np.eye(n)
            h_scaled = False
            d = -g
            dg = -float(g @ g)

        # fraction-to-boundary rule keeps iterates strictly interior
        alpha_max = 1.0
        pos = d > 0.0
        neg = d < 0.0
        cap_hi = pos & fin_hi
        if np.any(cap_hi):
            alpha_max = min(
                alpha_max,
                _BOUNDARY_FRACTION * float(np.min((hi[cap_hi] - z[cap_hi]) / d[cap_hi])),
            )
        cap_lo = neg & fin_lo
        if np.any(cap_lo):
            alpha_max = min(
                alpha_max,
                _BOUNDARY_FRACTION * float(np.min((lo[cap_lo] - z[cap_lo]) / d[cap_lo])),
            )
        if alpha_max <= 1e-16:
            h_inv = np.eye(n)
            h_scaled = False
            iters += 1
            continue

        # start near the last accepted step length to cut backtracking work
        alpha = min(1.0, alpha_max, max(4.0 * alpha_prev, 1e-3))
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            z_new = z + alpha * d
            m_new = merit_value(z_new, mu, lam)
            if math.isfinite(m_new) and m_new <= merit + _ARMIJO * alpha * dg:
                accepted = True
                break
            alpha *= _BACKTRACK
        iters += 1
        if not accepted:
            if gnorm <= 10.0 * options.tol_kkt and abs(c) <= _EQ_TOL:
                status = "converged"
            break

        try:
            m_chk, g_new, f, c, g_f, g_c = merit_gradient(z_new, mu, lam)
        except (NumericsError, OverflowError, ValueError):
            status = "numeric_failure"
            break
        if not np.all(np.isfinite(g_new)):
            status = "numeric_failure"
            break

        alpha_prev = alpha
        s = z_new - z
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if not h_scaled:
                # size the initial metric from the first observed curvature
                h_inv = (sy / float(y @ y)) * np.eye(n)
                h_scaled = True
            r = 1.0 / sy
            hy = h_inv @ y
            h_inv += np.outer(s, s) * (r * r * float(y @ hy) + r) - (
                np.outer(hy, s) + np.outer(s, hy)
            ) * r
        z, g, merit = z_new, g_new, m_chk

    # f, c, g_f, g_c always describe the current iterate z
    residual = kkt_residual(z, c, lam, g_f, g_c)
    z_out = np.clip(z, lo, hi)
    return NlpSolution(z_out, f, iters, residual, status, lam, c, h_inv)
