"""Exception types shared across the package."""


class PursuitLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(PursuitLabError, ValueError):
    """Operand shapes are incompatible."""


class NonFiniteEntries(PursuitLabError, ValueError):
    """An input contains NaN or infinite entries."""


class RankDeficient(PursuitLabError, ValueError):
    """Matrix has (numerically) dependent columns where full rank is required."""


class NotPositiveDefinite(PursuitLabError, ValueError):
    """Symmetric factorization hit a non-positive pivot."""


class SingularMatrix(PursuitLabError, ValueError):
    """Smallest Gram eigenvalue is below tolerance."""


class InvalidDims(PursuitLabError, ValueError):
    """Requested sizes violate a constructor precondition."""


class ZeroSignal(PursuitLabError, ValueError):
    """Measured signal has zero energy, so a finite SNR cannot be attained."""


class InvalidOmega(PursuitLabError, ValueError):
    """Landweber step size exceeds the spectral bound for the active columns."""


class ZeroSpread(PursuitLabError, ValueError):
    """Signal entries are all equal; the NRMSE denominator vanishes."""


class UndefinedSnr(PursuitLabError, ValueError):
    """SNR requested for a zero-norm signal or noise vector."""


class TooLarge(PursuitLabError, ValueError):
    """Exhaustive enumeration would exceed the configured budget."""


class ParseError(PursuitLabError, ValueError):
    """Config file could not be parsed.

    Carries the 1-based line number when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(PursuitLabError, ValueError):
    """A configuration value violates an invariant."""
