"""Shared fixtures and the implementation matrix."""

import pytest

from optmap.indexmap import implementations

IMPLS = implementations()
IMPL_NAMES = sorted(IMPLS)


@pytest.fixture(params=IMPL_NAMES)
def impl(request):
    """One index-map implementation module per run (pure and compiled)."""
    return IMPLS[request.param]
