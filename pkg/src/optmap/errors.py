"""Exception types shared across the package."""


class OptmapError(Exception):
    """Base class for optmap-specific errors."""


class CapacityError(OptmapError):
    """The index map ran out of 32-bit dense-index headroom."""


class StaleHandleError(OptmapError):
    """A handle to a deleted entity was used where a live one is required."""


class UnsupportedConstraintError(OptmapError):
    """The backend does not support the submitted constraint kind and no
    bridge is registered for it."""


class ContractViolationError(OptmapError):
    """A backend received an operation that violates its contract, e.g. an
    out-of-range dense index.  Indicates a bug in the mapping layer."""
