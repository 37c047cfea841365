import pytest

from ffdistance.field import FieldCtx


@pytest.fixture(scope="session")
def field():
    cache = {}

    def make(q):
        if q not in cache:
            cache[q] = FieldCtx(q)
        return cache[q]

    return make
