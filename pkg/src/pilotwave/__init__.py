"""Pilot-wave quantum measurement laboratory.

Closed-form wave evolution, guidance-equation trajectories, equilibrium
sampling, and three classic experiments: two-slit interference, spin
splitting in a magnet gradient, and two-particle spin correlations.
"""
from ._kernels import BACKEND
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import (
    AmbiguousRegionError,
    ConfigError,
    DegenerateTimeError,
    DensityFloorError,
    DomainError,
    InsufficientSampleError,
    NonSeparatingError,
    NullSpinorError,
    PilotWaveError,
    QuadratureConvergenceError,
    StepUnderflowError,
)
from .gaussian import ComplexGaussian1D, GaussianPacket, free_kernel
from .guidance import (
    SpinOrientation,
    Trajectory,
    VelocityField,
    equivariance_check,
    integrate_ensemble,
    integrate_trajectory,
    sample_initial_positions,
    spin_orientation,
    velocity_from_scalar_wave,
    velocity_from_spinor,
)
from .quadrature import QuadratureSpec, integrate_complex

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DEFAULT_CONSTANTS",
    "PhysicalConstants",
    "ComplexGaussian1D",
    "GaussianPacket",
    "free_kernel",
    "SpinOrientation",
    "Trajectory",
    "VelocityField",
    "equivariance_check",
    "integrate_ensemble",
    "integrate_trajectory",
    "sample_initial_positions",
    "spin_orientation",
    "velocity_from_scalar_wave",
    "velocity_from_spinor",
    "QuadratureSpec",
    "integrate_complex",
    "PilotWaveError",
    "AmbiguousRegionError",
    "ConfigError",
    "DegenerateTimeError",
    "DensityFloorError",
    "DomainError",
    "InsufficientSampleError",
    "NonSeparatingError",
    "NullSpinorError",
    "QuadratureConvergenceError",
    "StepUnderflowError",
    "__version__",
]
