import pytest

from hyperamsey import constructions as cons


@pytest.fixture(scope="session")
def K3():
    return cons.complete_graph(3)


@pytest.fixture(scope="session")
def F1():
    return cons.lifted_triangle(4)


@pytest.fixture(scope="session")
def F2():
    return cons.tight_cycle(4, 8)
