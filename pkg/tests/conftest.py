import pytest
from hypothesis import HealthCheck, settings

# GB-backed properties can be slow on unlucky draws; keep example counts
# modest and let individual runs take the time they take.
settings.register_profile(
    "exact",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def QR2():
    from koszul_lab import RingSpec
    return RingSpec("Q", ("x", "y"))


@pytest.fixture(scope="session")
def QR3():
    from koszul_lab import RingSpec
    return RingSpec("Q", ("x", "y", "z"))


@pytest.fixture(scope="session")
def F101_3():
    from koszul_lab import RingSpec
    return RingSpec(101, ("x", "y", "z"))
