import pytest

from treeperc.trees import make_graph


@pytest.fixture(scope="session")
def tree3():
    return make_graph("tree", 3)


@pytest.fixture(scope="session")
def txt3():
    return make_graph("TxT", 3)


@pytest.fixture(scope="session")
def txz3():
    return make_graph("TxZ", 3)
