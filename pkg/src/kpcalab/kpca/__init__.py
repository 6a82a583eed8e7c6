"""Kernel-based predictive control allocation: transcription, solver, controller."""

from .config import KpcaConfig, SolverOptions
from .controller import KpcaController
from .solver import NlpSolution, solve
from .transcribe import DecisionVector, NlpProblem, cost_gradient_check, transcribe

__all__ = [
    "DecisionVector",
    "KpcaConfig",
    "KpcaController",
    "NlpProblem",
    "NlpSolution",
    "SolverOptions",
    "cost_gradient_check",
    "solve",
    "transcribe",
]
