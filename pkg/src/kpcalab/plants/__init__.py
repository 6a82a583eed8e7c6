"""Plant models in two-subsystem canonical form, with kernel families and linearization."""

from .base import (
    EquilibriumError,
    InputBounds,
    LinearizedSystem,
    PlantModel,
    PlantState,
    SingularityError,
    controllability_rank,
    linearize,
    restrict_inputs,
)
from .uav2d import Uav2dModel, Uav2dParams
from .uav3d import Uav3dModel, Uav3dParams
from .vessel import VesselModel, VesselParams

__all__ = [
    "EquilibriumError",
    "InputBounds",
    "LinearizedSystem",
    "PlantModel",
    "PlantState",
    "SingularityError",
    "Uav2dModel",
    "Uav2dParams",
    "Uav3dModel",
    "Uav3dParams",
    "VesselModel",
    "VesselParams",
    "controllability_rank",
    "linearize",
    "restrict_inputs",
]
