import pytest

from hecke_forge import AlgebraContext, build_fgl, build_root_datum


@pytest.fixture(scope="session")
def a1():
    return build_root_datum("A1")


@pytest.fixture(scope="session")
def a2():
    return build_root_datum("A2")


@pytest.fixture(scope="session")
def b2():
    return build_root_datum("B2")


@pytest.fixture(scope="session")
def g2():
    return build_root_datum("G2")


@pytest.fixture(scope="session")
def ctx_a1_add(a1):
    return AlgebraContext(a1, build_fgl("add", 8))


@pytest.fixture(scope="session")
def ctx_a1_mult1(a1):
    return AlgebraContext(a1, build_fgl("mult:1", 8))


@pytest.fixture(scope="session")
def ctx_a1_multb(a1):
    return AlgebraContext(a1, build_fgl("mult:beta", 8))


@pytest.fixture(scope="session")
def ctx_a2_add(a2):
    return AlgebraContext(a2, build_fgl("add", 8))


@pytest.fixture(scope="session")
def ctx_a2_mult1(a2):
    return AlgebraContext(a2, build_fgl("mult:1", 8))


@pytest.fixture(scope="session")
def ctx_a2_multb(a2):
    return AlgebraContext(a2, build_fgl("mult:beta", 8))


@pytest.fixture(scope="session")
def ctx_a2_exp(a2):
    return AlgebraContext(a2, build_fgl("exp:b2,b3", 6))
