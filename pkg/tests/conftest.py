import pytest

from realtrace.battery import da3, zero_star_one, zero_star_one_plus
from realtrace.sigma11 import build_setup


@pytest.fixture
def da():
    return da3()


@pytest.fixture
def R():
    return zero_star_one()


@pytest.fixture
def W():
    return zero_star_one_plus()


@pytest.fixture(scope="session")
def setup():
    return build_setup("01")
