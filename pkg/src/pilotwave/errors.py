"""Exception hierarchy shared across the package."""


class PilotWaveError(Exception):
    """Base class for all package errors."""


class DegenerateTimeError(PilotWaveError):
    """Propagator requested with t <= t0."""


class QuadratureConvergenceError(PilotWaveError):
    """Panel doubling never met the requested tolerance."""


class DomainError(PilotWaveError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class DensityFloorError(PilotWaveError):
    """Probability density below the floor at a requested point."""


class StepUnderflowError(PilotWaveError):
    """Trajectory step refinement bottomed out without converging."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class NullSpinorError(PilotWaveError):
    """Spin orientation requested for a spinor of zero norm."""


class AmbiguousRegionError(PilotWaveError):
    """Impact position where neither spinor component dominates."""


class InsufficientSampleError(PilotWaveError):
    """Binned test with an expected count below the chi-square validity floor."""


class NonSeparatingError(PilotWaveError):
    """Stern-Gerlach configuration whose packets never separate (u <= 0)."""


class ConfigError(PilotWaveError, ValueError):
    """Bad configuration file or override; carries the offending line."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
