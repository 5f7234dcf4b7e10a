import time

import pytest

from bicyclic2 import census


@pytest.fixture(scope="session")
def census6():
    """Census with verdicts through order 64, shared by the whole session."""
    t0 = time.time()
    cen = census.bicyclic_census(6)
    return {"census": cen, "seconds": time.time() - t0}
