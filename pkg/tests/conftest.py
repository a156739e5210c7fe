import pytest

from forcelab.generate import all_preorders_up_to_3, name_pool, named_classics, \
    suite_preorders
from forcelab.orders import Preorder


@pytest.fixture(scope="session")
def p3() -> Preorder:
    return named_classics()["p3"]


@pytest.fixture(scope="session")
def chain2() -> Preorder:
    return Preorder.from_generators(("one", "a"), [("a", "one")], "one")


@pytest.fixture(scope="session")
def chain3() -> Preorder:
    return named_classics()["chain3"]


@pytest.fixture(scope="session")
def antichain3() -> Preorder:
    return named_classics()["antichain3"]


@pytest.fixture(scope="session")
def single() -> Preorder:
    return Preorder.from_generators(("one",), [], "one")


@pytest.fixture(scope="session")
def small_suite() -> list[Preorder]:
    """Everything on <= 3 conditions plus the classics; quick per-module runs."""
    return all_preorders_up_to_3() + list(named_classics().values())


@pytest.fixture(scope="session")
def full_suite() -> list[Preorder]:
    """The acceptance corpus: >= 200 preorders with <= 5 conditions."""
    return suite_preorders(count=200, seed=0)


def pool_of(P: Preorder):
    return list(name_pool(P))
