import pytest

from leaffun.leaf import make_basis


@pytest.fixture(scope="session")
def basis1():
    return make_basis(1)


@pytest.fixture(scope="session")
def basis2():
    return make_basis(2)


@pytest.fixture(scope="session")
def basis3():
    return make_basis(3)
