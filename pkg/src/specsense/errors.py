"""Exception types shared across the package.

Plain ``ValueError`` is used for ordinary bad arguments (dimension and
domain mistakes); the classes below mark conditions callers may want to
catch specifically.
"""


class RegimeError(ValueError):
    """Sample budget too small for the Wishart regime (Ns must exceed M*L)."""


class SingularCovarianceError(ArithmeticError):
    """Minimum covariance eigenvalue vanished; the eigenvalue-ratio statistics are undefined."""


class NumericError(ArithmeticError):
    """Numerical failure (non-finite input, diverging integration)."""


class ConfigError(ValueError):
    """Scenario configuration problem; message names the offending field."""
