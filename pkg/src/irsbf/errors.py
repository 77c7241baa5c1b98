"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent dimensions, invalid parameters or malformed config files."""


class NumericalError(ArithmeticError):
    """A numerical operation left its valid domain (singular system, bad determinant)."""
