"""optmap: delete-stable handle maps and a solver-agnostic modeling core.

The index maps translate immutable handles to dense array positions that
stay compact under deletion; the model layer uses them to keep user
handles valid while a backend (in-memory reference or LP-file writer)
holds the actual matrix data.
"""

from optmap.backends import (
    Backend,
    ConstraintSense,
    LinearOnlyBackend,
    LpWriterBackend,
    ObjectiveSense,
    ReferenceBackend,
    SosType,
    VariableDomain,
)
from optmap.bridge import SECOND_ORDER_CONE, bridge_soc, register_soc_bridge
from optmap.errors import (
    CapacityError,
    ContractViolationError,
    OptmapError,
    StaleHandleError,
    UnsupportedConstraintError,
)
from optmap.expressions import (
    ConstraintIndex,
    ConstraintType,
    ScalarAffineFunction,
    ScalarQuadraticFunction,
    VariableIndex,
)
from optmap.indexmap import (
    IMPLEMENTATION,
    INVALID_INDEX,
    ArrayMap,
    BipurMap,
    implementations,
)
from optmap.model import Model, ModelCounts

__version__ = "0.1.0"

__all__ = [
    "ArrayMap",
    "Backend",
    "BipurMap",
    "CapacityError",
    "ConstraintIndex",
    "ConstraintSense",
    "ConstraintType",
    "ContractViolationError",
    "IMPLEMENTATION",
    "INVALID_INDEX",
    "LinearOnlyBackend",
    "LpWriterBackend",
    "Model",
    "ModelCounts",
    "ObjectiveSense",
    "OptmapError",
    "ReferenceBackend",
    "SECOND_ORDER_CONE",
    "ScalarAffineFunction",
    "ScalarQuadraticFunction",
    "SosType",
    "StaleHandleError",
    "UnsupportedConstraintError",
    "VariableDomain",
    "VariableIndex",
    "bridge_soc",
    "implementations",
    "register_soc_bridge",
    "__version__",
]
