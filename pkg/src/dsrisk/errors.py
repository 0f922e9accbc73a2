"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """An iterative evaluation did not converge within its iteration cap."""


class DataError(ValueError):
    """Input data (block stamps, fixtures) is malformed or insufficient."""


class StructureError(ValueError):
    """Two tables cannot be compared because their shapes or axes differ."""
