import pytest

from fiberpol import default_params


@pytest.fixture(scope="session")
def params():
    # Immutable reference parameter set, shared across the whole run.
    return default_params()
