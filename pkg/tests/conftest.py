import pytest

from skewseries import parse_ring_preset


@pytest.fixture(scope="session")
def z8():
    return parse_ring_preset("zmod:2^3")


@pytest.fixture(scope="session")
def z4():
    return parse_ring_preset("zmod:2^2")


@pytest.fixture(scope="session")
def f27():
    return parse_ring_preset("truncpoly:3:3:c=2")
