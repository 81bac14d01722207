"""Exception types shared across the package."""


class FsrkError(Exception):
    """Base class for all package-specific errors."""


class CatalogueMissError(FsrkError, KeyError):
    """Requested name is not in a catalogue; message lists what is."""

    def __init__(self, name, available):
        self.name = name
        self.available = tuple(sorted(available))
        super().__init__(
            f"unknown catalogue name {name!r}; available: {', '.join(self.available)}"
        )


class DimensionError(FsrkError, ValueError):
    """Shapes of coupled objects disagree (tableau rows, grids, alpha tables)."""


class ConsistencyError(FsrkError, ValueError):
    """A splitting table violates the first-order consistency condition."""


class UnsupportedTableauError(FsrkError, ValueError):
    """Stepping requested for a tableau outside the supported (DIRK) class."""


class StageSolveError(FsrkError, RuntimeError):
    """Newton iteration for an implicit stage failed to converge.

    Carries the splitting stage / operator indices (1-based, when known)
    and the last residual norm.
    """

    def __init__(self, message, *, stage=None, operator=None, residual=None):
        super().__init__(message)
        self.stage = stage
        self.operator = operator
        self.residual = residual

    def at(self, stage, operator):
        """Re-raise helper: attach splitting-stage context to a bare error."""
        return StageSolveError(
            f"{self.args[0]} (splitting stage {stage}, operator {operator})",
            stage=stage,
            operator=operator,
            residual=self.residual,
        )


class PoleProximityError(FsrkError, RuntimeError):
    """Stability evaluation requested too close to a pole; carries z."""

    def __init__(self, z, estimate):
        self.z = tuple(z)
        self.condition_estimate = estimate
        super().__init__(
            f"stage matrix nearly singular at z={self.z} "
            f"(condition estimate {estimate:.2e})"
        )


class DegenerateRayError(FsrkError, ValueError):
    """The restricted stability function has no stable neighbourhood of 0."""


class SpecFileError(FsrkError, ValueError):
    """A declarative scheme/problem document fails to resolve."""
