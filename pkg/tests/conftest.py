import pytest

from drinfeld import context_for


@pytest.fixture(scope="session")
def ctx64():
    "GF(2^6): holds k = GF(2), k_2 = GF(4), k_3 = GF(8)."
    return context_for(2, 1, 3, [1, 2, 3])


@pytest.fixture(scope="session")
def ctx729():
    "GF(3^6): holds k = GF(3), k_2 = GF(9), k_3 = GF(27)."
    return context_for(3, 1, 3, [1, 2, 3])


@pytest.fixture(scope="session")
def omega4(ctx64):
    "A generator of GF(4) over GF(2) inside the ambient field."
    return next(
        a for a in ctx64.subfield_elements(2) if a not in (ctx64.zero, ctx64.one)
    )
