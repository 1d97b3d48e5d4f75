import numpy as np
import pytest

from penalty_lab import AgentType, CiPi, Economy, Exponential, Uniform
from penalty_lab.verification import example_economies


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: statistical checks over many replicates")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def example4() -> Economy:
    return example_economies()['example4']


@pytest.fixture
def example7() -> Economy:
    return example_economies()['example7']


@pytest.fixture
def example8() -> Economy:
    return example_economies()['example8']


@pytest.fixture
def exponential_naive() -> AgentType:
    return AgentType(model=Exponential(lam=0.2), w=2.5, beta=0.4, betahat=1.0)


@pytest.fixture
def uniform_naive() -> AgentType:
    return AgentType(model=Uniform(alpha=10.0), w=4.0, beta=1.0, betahat=1.0)


@pytest.fixture
def cipi_non_participant() -> AgentType:
    # c - betahat*w = 9 lies above the break-even penalty 1/9.
    return AgentType(model=CiPi(c=9.0, p=0.1), w=10.0, beta=0.0, betahat=0.0)
