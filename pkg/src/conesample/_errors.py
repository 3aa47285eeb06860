"""Exception types shared across the package."""


class NumericalError(ArithmeticError):
    """An iterative routine failed to converge or produced a non-finite value."""


class UnderflowError(NumericalError):
    """A solid angle fraction is too small to represent in double precision."""
