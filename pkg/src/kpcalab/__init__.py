"""Simulation laboratory for overactuated thrust-vectoring systems.

The package bundles three plant models whose linearizations lose
controllability at physically meaningful equilibria (a UAV manipulating an
object in 2-D and 3-D, and a surface vessel driven by two azimuthal
thrusters), the analytic cascaded control-allocation laws for the UAV cases,
and a kernel-based predictive control allocator (KPCA) that computes the
allocated actuator set-point online from a receding-horizon program.
"""

__version__ = "0.1.0"
