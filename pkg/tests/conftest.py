import pytest

from quadpair.forms import CANONICAL_PAIR, FormPair


@pytest.fixture(scope="session")
def pair() -> FormPair:
    return CANONICAL_PAIR
