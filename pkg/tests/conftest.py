import pytest

from heapscope.cache import QueryCache
from heapscope.scenarios import linkedlist_like, random_soup, string_like, t0_minimal
from heapscope.store import ingest


@pytest.fixture(scope="session")
def t0_events():
    return t0_minimal()


@pytest.fixture(scope="session")
def t0_store(t0_events):
    return ingest(t0_events, "test")


@pytest.fixture(scope="session")
def string_store():
    return ingest(string_like(1), "strings")


@pytest.fixture(scope="session")
def linked_store():
    return ingest(linkedlist_like(1), "lists")


@pytest.fixture(scope="session")
def soup_stores():
    """Memoizing factory for ingested random-soup stores."""
    stores = {}

    def get(seed, objects=None, events=None):
        key = (seed, objects, events)
        if key not in stores:
            stores[key] = ingest(random_soup(seed, objects, events), f"soup{seed}")
        return stores[key]

    return get


@pytest.fixture
def cache():
    return QueryCache()
