import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture(scope="session")
def tau_10k():
    from expsumlab import hecke
    return hecke.build_tau_table(10 ** 4)


@pytest.fixture(scope="session")
def tau_20k():
    from expsumlab import hecke
    return hecke.build_tau_table(2 * 10 ** 4)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    from expsumlab import kernels
    kernels.warm_up()
