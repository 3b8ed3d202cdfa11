import pytest
from hypothesis import HealthCheck, settings

from toroidal_yangian.cartan import build_cartan

settings.register_profile(
    "exact",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def A1():
    return build_cartan("A1")


@pytest.fixture(scope="session")
def A2():
    return build_cartan("A2")


@pytest.fixture(scope="session")
def C2():
    return build_cartan("C2")


@pytest.fixture(scope="session")
def G2():
    return build_cartan("G2")
