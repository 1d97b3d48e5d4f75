import math

import numpy as np
import pytest
from pydantic import ValidationError

from penalty_lab import AgentType, CiPi, Exponential, Uniform
from penalty_lab import agent_types


def test_example4_bids(example4):
    a1, a2 = example4.agents
    assert agent_types.max_acceptable_penalty(a1) == pytest.approx(24.0, abs=1e-12)
    assert agent_types.max_acceptable_penalty(a2) == pytest.approx(4.0, abs=1e-12)
    assert agent_types.sp_bid(a1) == 0.0
    assert agent_types.sp_bid(a2) == pytest.approx(2.0, abs=1e-12)


def test_example4_sup_at_jump(example4):
    a1 = example4.agents[0]
    # The jump sits at c - betahat*w = 2; ûhat(2) = 6*0.8 - 2*0.2.
    assert agent_types.sup_utility(a1, 0.0) == pytest.approx(4.4, abs=1e-12)
    assert agent_types.preferred_penalty(a1, 0.0) == pytest.approx(2.0, abs=1e-12)
    assert agent_types.preferred_penalty(a1, 4.0) == pytest.approx(4.0, abs=1e-12)


def test_example7_naive_agent(example7):
    a1, a2 = example7.agents
    assert agent_types.max_acceptable_penalty(a1) == pytest.approx(10.0, abs=1e-12)
    assert agent_types.sp_bid(a1) == pytest.approx(2.0, abs=1e-12)
    assert agent_types.max_acceptable_penalty(a2) == pytest.approx(3.0, abs=1e-12)
    assert agent_types.sp_bid(a2) == pytest.approx(2.5, abs=1e-12)
    # Expects to show at penalty 3, but the true threshold is 3.5.
    assert agent_types.show_prob(a1, 3.0, believed=True) == pytest.approx(0.8)
    assert agent_types.show_prob(a1, 3.0) == 0.0
    assert agent_types.expected_utility(a1, 3.0) == pytest.approx(-3.0)


def test_example8_declines_high_penalty(example8):
    a1 = example8.agents[0]
    assert agent_types.max_acceptable_penalty(a1) == pytest.approx(10.0, abs=1e-12)
    assert agent_types.subjective_utility(a1, 12.0) == pytest.approx(-1.0, abs=1e-12)


def test_exponential_closed_forms(exponential_naive):
    a = exponential_naive
    assert agent_types.sp_bid(a) == pytest.approx(2.5 - 5 + 5 * math.exp(-0.5), abs=1e-12)
    assert agent_types.max_acceptable_penalty(a) == pytest.approx(-2.5 + math.log(2) / 0.2, abs=1e-12)
    assert agent_types.subjective_utility(a, agent_types.max_acceptable_penalty(a)) == pytest.approx(0.0, abs=1e-12)
    assert agent_types.preferred_penalty(a, 0.7) == 0.7


def test_uniform_closed_forms(uniform_naive):
    a = uniform_naive
    assert agent_types.sp_bid(a) == pytest.approx(0.8, abs=1e-12)
    assert agent_types.max_acceptable_penalty(a) == pytest.approx(6 - math.sqrt(20), abs=1e-12)
    assert agent_types.show_prob(a, 1.0) == pytest.approx(0.5)
    assert agent_types.show_prob(a, 7.0) == 1.0


def test_uniform_plateau_beats_interior():
    a = AgentType(model=Uniform(alpha=10.0), w=4.0, beta=0.5, betahat=0.5)
    # ûhat(6) = -1.2 lies below the plateau w - alpha/2 = -1 reached at z = 8.
    assert agent_types.subjective_utility(a, 6.0) == pytest.approx(-1.2, abs=1e-12)
    assert agent_types.sup_utility(a, 6.0) == pytest.approx(-1.0, abs=1e-12)
    assert agent_types.preferred_penalty(a, 6.0) == pytest.approx(8.0, abs=1e-12)
    assert agent_types.preferred_penalty(a, 0.0) == 0.0


def test_non_participant(cipi_non_participant):
    a = cipi_non_participant
    assert agent_types.max_acceptable_penalty(a) == 0.0
    assert not agent_types.is_participant(a)
    # Paying z_min and never showing beats jumping to the show threshold.
    assert agent_types.preferred_penalty(a, 0.5) == 0.5


@pytest.mark.parametrize('fn', [
    agent_types.expected_utility,
    agent_types.subjective_utility,
    agent_types.sup_utility,
    agent_types.preferred_penalty,
])
def test_negative_penalty_rejected(fn, uniform_naive):
    with pytest.raises(ValueError):
        fn(uniform_naive, -0.1)


def test_utility_at_negative_penalty(uniform_naive):
    # A show-up reward of 1 still leaves the naive agent showing with probability 0.3.
    assert agent_types.utility_at_penalty(uniform_naive, -1.0, believed=True) == pytest.approx(0.3 * (4 - 1.5) + 0.7)


@pytest.mark.parametrize('kwargs', [
    dict(model=dict(kind='cipi', c=5.0, p=0.5), w=5.0, beta=0.5, betahat=0.5),
    dict(model=dict(kind='exponential', lam=0.5), w=2.0, beta=0.5, betahat=0.5),
    dict(model=dict(kind='uniform', alpha=4.0), w=2.0, beta=0.5, betahat=0.5),
    dict(model=dict(kind='uniform', alpha=4.0), w=1.0, beta=0.5, betahat=0.4),
    dict(model=dict(kind='cipi', c=1.0, p=1.0), w=5.0, beta=0.5, betahat=0.5),
])
def test_invalid_types(kwargs):
    with pytest.raises(ValidationError):
        AgentType(**kwargs)


def test_period1_draws(rng):
    a = AgentType(model=CiPi(c=2.0, p=0.3), w=4.0, beta=1.0, betahat=1.0)
    values, able = agent_types.sample_period1_values(a, rng, 100_000)
    assert np.all(values == -2.0)
    assert able.mean() == pytest.approx(0.3, abs=0.01)

    draws = [agent_types.sample_period1_value(a, rng) for _ in range(1_000)]
    assert set(draws) <= {-2.0, None}

    b = AgentType(model=Exponential(lam=0.5), w=1.0, beta=1.0, betahat=1.0)
    values, able = agent_types.sample_period1_values(b, rng, 100_000)
    assert able.all()
    assert values.max() <= 0
    assert values.mean() == pytest.approx(-2.0, rel=0.02)
