import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from boolnorm import BoolFun, Flat
from fixtures import G5_ANF, V1A1, V2A2

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=2000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def g5():
    return BoolFun.from_anf(G5_ANF, 5)


@pytest.fixture(scope="session")
def flat1():
    return Flat.from_matrix(*V1A1)


@pytest.fixture(scope="session")
def flat2():
    return Flat.from_matrix(*V2A2)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
