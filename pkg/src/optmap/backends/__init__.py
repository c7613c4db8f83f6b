"""Backend implementations and the contract they share."""

from optmap.backends.base import (
    Backend,
    ConstraintSense,
    ObjectiveSense,
    SosType,
    VariableDomain,
)
from optmap.backends.lp_writer import LpWriterBackend, format_number
from optmap.backends.reference import LinearOnlyBackend, ReferenceBackend

__all__ = [
    "Backend",
    "ConstraintSense",
    "LinearOnlyBackend",
    "LpWriterBackend",
    "ObjectiveSense",
    "ReferenceBackend",
    "SosType",
    "VariableDomain",
    "format_number",
]
