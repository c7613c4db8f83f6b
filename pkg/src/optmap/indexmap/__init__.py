"""Handle-to-dense-index maps.

Selects the compiled kernel when it is available, falling back to the
pure-Python implementation.  Set ``OPTMAP_PURE=1`` to force the fallback
(used by the differential tests and the kernel benchmark).
"""

import os

from optmap.indexmap import _pure
from optmap.indexmap._pure import INVALID_INDEX

if os.environ.get("OPTMAP_PURE"):
    _impl = _pure
    IMPLEMENTATION = "pure"
else:
    try:
        from optmap.indexmap import _kernel as _impl

        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = _pure
        IMPLEMENTATION = "pure"

BipurMap = _impl.BipurMap
ArrayMap = _impl.ArrayMap


def implementations():
    """Name -> module for every importable implementation.

    Always contains ``pure``; contains ``compiled`` when the extension
    built, regardless of which one is currently selected.
    """
    found = {"pure": _pure}
    try:
        from optmap.indexmap import _kernel
    except ImportError:
        pass
    else:
        found["compiled"] = _kernel
    return found


__all__ = [
    "ArrayMap",
    "BipurMap",
    "IMPLEMENTATION",
    "INVALID_INDEX",
    "implementations",
]
