import os

import pytest

from jacobsthal.primes import shared_table


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: takes more than a few seconds")
    config.addinivalue_line("markers", "full: full-scale ranges (sieve to ~1.01e8)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("JACOBSTHAL_SKIP_FULL") == "1":
        skip = pytest.mark.skip(reason="JACOBSTHAL_SKIP_FULL=1")
        for item in items:
            if "full" in item.keywords:
                item.add_marker(skip)


@pytest.fixture(scope="session")
def table():
    """Primes up to 1e7, shared by the whole session."""
    return shared_table(min_limit=10**7)
