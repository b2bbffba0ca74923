from functools import lru_cache

import pytest

from zzzy.codes import build_code


@lru_cache(maxsize=None)
def code(family: str, d: int):
    return build_code(family, d)


@pytest.fixture
def zzzy3():
    return code("zzzy", 3)


@pytest.fixture
def surface3():
    return code("surface", 3)


@pytest.fixture
def xzzx3():
    return code("xzzx", 3)
