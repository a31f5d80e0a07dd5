"""Exception types shared across the package."""


class EntroLedgerError(Exception):
    """Base class for all package errors."""


class NotHermitian(EntroLedgerError):
    """Operator fails the Hermiticity tolerance."""


class DimensionMismatch(EntroLedgerError):
    """Operator or state dimensions are inconsistent."""


class IncompatibleDimension(EntroLedgerError):
    """Coarse-graining dimension does not match the state."""


class CapExceeded(EntroLedgerError):
    """Composite Hilbert-space dimension exceeds the configured cap."""


class TargetOutOfRange(EntroLedgerError):
    """Entropy target outside the reachable range of the Gibbs curve."""


class UndefinedHeat(EntroLedgerError):
    """Heat rate requested at a step where the inverse temperature is undefined."""


class InvalidState(EntroLedgerError):
    """Matrix is not a valid density operator (trace, positivity, Hermiticity)."""


class ConfigError(EntroLedgerError):
    """Run configuration failed to parse or validate."""
