"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateFunctionError(ValueError):
    """A Φ-function vanishes where it must be positive."""


class ResolutionError(ValueError):
    """A requested block, cross or scale does not fit on the sampling grid."""


class PreconditionError(ValueError):
    """Input violates a hard precondition (e.g. non-zero-mean Besov input)."""
