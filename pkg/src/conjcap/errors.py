"""Exception taxonomy shared across the package."""


class DimensionError(ValueError):
    """Shapes are inconsistent or exceed the configured dimension cap."""


class ValidationError(ValueError):
    """An object fails its defining tolerance-aware invariant."""


class NotCompletelyPositiveError(ValidationError):
    """A matrix that should be a Choi matrix has a negative eigenvalue."""


class SingularConstructionError(ValueError):
    """A pseudo-inverse construction is inconsistent on its range."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap (dimension, iterations) was exceeded."""
