import pytest
from hypothesis import HealthCheck, settings

from gradedsusy.graded import with_closure
from gradedsusy.scqm import build_ladder, build_model

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cl4():
    return with_closure(build_model("cl4"))


@pytest.fixture(scope="session")
def cl2n():
    return with_closure(build_model("cl2n"))


@pytest.fixture(scope="session")
def cl6b():
    return with_closure(build_model("cl6b"))


@pytest.fixture(scope="session")
def ladder4(cl4):
    return build_ladder(cl4)


@pytest.fixture(scope="session")
def ladder6(cl6b):
    return build_ladder(cl6b)
