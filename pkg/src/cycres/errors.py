"""Exception types shared across the package."""


class CycresError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(CycresError):
    """Matrix dimensions do not fit the requested operation."""


class ValidationError(CycresError):
    """Input digraph or matrix violates a structural requirement."""


class TooSmallError(ValidationError):
    """Fewer than three vertices."""


class NotStronglyConnectedError(CycresError):
    """A vertex is unreachable where strong connectivity is required."""


class NotIrreducibleError(CycresError):
    """The matrix is not irreducible (its digraph is not strongly connected)."""


class ZeroElementError(CycresError):
    """Leading-term query on a zero polynomial or module element."""


class InternalError(CycresError):
    """An internal consistency check failed; indicates a bug."""
