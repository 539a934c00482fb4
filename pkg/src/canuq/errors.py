"""Exception types shared across the package."""


class CanuqError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteInput(CanuqError):
    """An input value is NaN or infinite."""


class OutsideMomentSpace(CanuqError):
    """A moment sequence prefix is not attainable by any probability measure.

    `index` is the first offending moment order (1-based).
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"moment sequence leaves the moment space at order {index}")


class InsufficientZetas(CanuqError):
    """The zeta sequence is too short for the requested polynomial degree."""


class DegenerateCluster(CanuqError):
    """Two support points coincide within tolerance (near-boundary canonical vector)."""


class SingularSystem(CanuqError):
    """The Vandermonde weight system is singular (coincident atoms)."""


class NegativeWeight(CanuqError):
    """A solved weight is significantly negative: the atom set is inadmissible.

    Must not occur for atoms generated from a canonical vector.
    """

    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"weight {index} is negative ({value:.3e}): inadmissible atom set")


class ConstraintViolation(CanuqError):
    """A moment coordinate lies outside its declared interval bounds."""


class ModelEvaluationFailure(CanuqError):
    """The model failed or returned a non-finite value at `point`."""

    def __init__(self, point, message=None):
        self.point = tuple(point) if point is not None else None
        super().__init__(message or f"model evaluation failed at {self.point}")


class InfeasibleConstraints(CanuqError):
    """No admissible measure exists within the declared moment boxes."""


class BracketFailure(CanuqError):
    """The quantile search could not bracket the requested probability level."""


class DomainError(CanuqError):
    """Model inputs violate the model's physical domain."""


class ConfigError(CanuqError):
    """A problem configuration file is malformed or inconsistent."""
