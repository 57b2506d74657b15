"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """An argument is outside the domain an operation accepts."""


class DegenerateGeometryError(ValueError):
    """Two points coincide, or a construction has no unique direction."""


class ScenarioError(ValueError):
    """A scenario or record file failed to parse or validate.

    ``field`` names the offending entry when one can be identified.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class SolverError(RuntimeError):
    """A solve could not produce a feasible plan."""
