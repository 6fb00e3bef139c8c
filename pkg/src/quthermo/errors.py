"""Exception types shared across the package."""


class QuthermoError(Exception):
    """Base class for all package errors."""


class InvariantViolation(QuthermoError, ValueError):
    """An operator or state failed a structural check (hermiticity, trace, positivity)."""


class UsageError(QuthermoError, ValueError):
    """Invalid arguments or configuration (bad bipartition, malformed config file)."""


class DomainError(QuthermoError, ValueError):
    """Mathematically out-of-domain input (T <= 0, ln of a negative eigenvalue)."""


class ResourceError(QuthermoError, RuntimeError):
    """A configured resource cap (matrix dimension) would be exceeded."""


class NumericalError(QuthermoError, RuntimeError):
    """A computation failed to produce a usable number (degenerate family, NaN)."""


class RegimeWarning(UserWarning):
    """A high-temperature expansion is being used outside its regime of validity."""
