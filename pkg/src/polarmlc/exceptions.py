"""Exception types shared across the package."""


class NumericalRangeError(ArithmeticError):
    """A computation produced a non-finite value or failed to converge."""
