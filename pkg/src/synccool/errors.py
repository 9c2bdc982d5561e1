"""Exception types shared across the package."""


class SynccoolError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(SynccoolError, ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class ConsistencyError(SynccoolError):
    """An internal-state invariant (Hermiticity, normalization, ...) is violated."""


class PSDViolationError(SynccoolError):
    """A noise covariance matrix is non-positive beyond the repair tolerance."""

    def __init__(self, worst_eigenvalue, tolerance):
        self.worst_eigenvalue = worst_eigenvalue
        self.tolerance = tolerance
        super().__init__(
            f"noise covariance has eigenvalue {worst_eigenvalue:.3e} below "
            f"the repair tolerance {tolerance:.3e}"
        )


class NumericalBlowupError(SynccoolError):
    """NaN/Inf detected during integration; carries step metadata."""

    def __init__(self, message, t=None, step=None, trajectory=None):
        self.t = t
        self.step = step
        self.trajectory = trajectory
        parts = [message]
        if trajectory is not None:
            parts.append(f"trajectory={trajectory}")
        if step is not None:
            parts.append(f"step={step}")
        if t is not None:
            parts.append(f"t={t:.6g}")
        super().__init__(", ".join(parts))


class UndefinedKurtosisError(SynccoolError):
    """Kurtosis requested for a degenerate (all-zero second moment) sample."""


class ConfigError(SynccoolError, ValueError):
    """A run configuration failed schema validation."""
