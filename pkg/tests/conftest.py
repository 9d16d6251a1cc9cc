import pytest

from plaidkite.params import make_param


@pytest.fixture(scope="session")
def p29():
    return make_param(2, 9)


@pytest.fixture(scope="session")
def p38():
    return make_param(3, 8)


@pytest.fixture(scope="session")
def p45():
    return make_param(4, 5)


@pytest.fixture(scope="session")
def p12():
    return make_param(1, 2)
