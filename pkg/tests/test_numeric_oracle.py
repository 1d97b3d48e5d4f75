import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.special import lambertw

from penalty_lab import AgentType, Economy, OracleConfig, Uniform, agent_types
from penalty_lab.mechanisms import run_fcfs, run_two_bid
from penalty_lab.metrics import evaluate, first_best_value, welfare_at_penalty
from penalty_lab.numeric_oracle import (
    LambertWDomainError,
    best_response_search,
    bracket_bound,
    grid_first_best,
    grid_sup,
    lambert_w_minus1,
    mc_outcome_check,
    numeric_zero_crossing,
    quad_expected_utility,
    quad_show_prob,
    quad_subjective_utility,
    quad_welfare,
)
from penalty_lab.numeric_oracle.lambert import BRANCH_POINT

from strategies import agent_types as agent_type_strategy, economies

SMALL = OracleConfig(grid_points=2001, n_profiles=8)


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('x', [-0.367, -0.3, -0.1, -1e-3, -1e-10, -1e-100, -1e-300])
def test_lambert_matches_scipy(x):
    w = lambert_w_minus1(x)
    assert w <= -1
    assert w == pytest.approx(lambertw(x, -1).real, rel=1e-10)


def test_lambert_branch_point():
    assert lambert_w_minus1(BRANCH_POINT) == -1.0


@pytest.mark.parametrize('x', [0.0, 0.5, -0.4, float('nan')])
def test_lambert_domain(x):
    with pytest.raises(LambertWDomainError):
        lambert_w_minus1(x)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(a=agent_type_strategy())
def test_quadrature_matches_closed_forms(a):
    z = 0.5 * agent_types.max_acceptable_penalty(a) + 0.25
    scale = 1 + abs(agent_types.subjective_utility(a, z))
    assert quad_subjective_utility(a, z, SMALL) == pytest.approx(agent_types.subjective_utility(a, z), abs=1e-6 * scale)
    assert quad_expected_utility(a, z, SMALL) == pytest.approx(agent_types.expected_utility(a, z), abs=1e-6 * scale)
    assert quad_welfare(a, z, SMALL) == pytest.approx(welfare_at_penalty(a, z), abs=1e-6 * (1 + a.w))
    assert quad_show_prob(a, z) == pytest.approx(agent_types.show_prob(a, z), abs=1e-12)


# ---------------------------------------------------------------------------
# Grid search
# ---------------------------------------------------------------------------

def test_grid_sup_finds_cipi_jump(example4):
    a1 = example4.agents[0]
    found = grid_sup(a1, 0.0, SMALL)
    assert found.value == pytest.approx(4.4, abs=1e-9)
    assert found.argmax == pytest.approx(2.0, abs=1e-8)
    assert grid_sup(a1, 5.0, SMALL).argmax == pytest.approx(5.0, abs=1e-12)


def test_grid_sup_finds_uniform_plateau():
    a = AgentType(model=Uniform(alpha=10.0), w=4.0, beta=0.5, betahat=0.5)
    found = grid_sup(a, 6.0, SMALL)
    assert found.value == pytest.approx(-1.0, abs=1e-9)
    assert found.argmax == pytest.approx(8.0, abs=1e-6)


@pytest.mark.parametrize('economy, index, z0', [
    ('example4', 0, 24.0), ('example4', 1, 4.0), ('example7', 0, 10.0), ('example8', 0, 10.0),
])
def test_zero_crossing_on_examples(economy, index, z0, request):
    a = request.getfixturevalue(economy).agents[index]
    assert numeric_zero_crossing(a, SMALL) == pytest.approx(z0, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(a=agent_type_strategy())
def test_zero_crossing_matches_closed_form(a):
    z0 = agent_types.max_acceptable_penalty(a)
    assert numeric_zero_crossing(a, SMALL) == pytest.approx(z0, abs=1e-6 * (1 + z0))
    assert bracket_bound(a) > z0


@settings(max_examples=40, deadline=None)
@given(a=agent_type_strategy())
def test_grid_first_best_matches_closed_form(a):
    for objective in ('welfare', 'utilization'):
        exact = first_best_value(a, objective)
        assert grid_first_best(a, objective, SMALL).value == pytest.approx(exact, abs=1e-4 * (1 + abs(exact)))


def test_grid_first_best_uniform(uniform_naive):
    welfare = grid_first_best(uniform_naive, 'welfare', SMALL)
    assert welfare.value == pytest.approx(0.8, abs=1e-9)
    usage = grid_first_best(uniform_naive, 'utilization', SMALL)
    assert usage.value == pytest.approx(0.8, abs=1e-6)
    assert usage.argmax == pytest.approx(4.0, abs=1e-6)


# ---------------------------------------------------------------------------
# Best responses
# ---------------------------------------------------------------------------

@pytest.mark.parametrize('mech', ['2BPB', 'MPlus1'])
@pytest.mark.parametrize('economy', ['example4', 'example7', 'example8'])
def test_prescribed_bids_are_dominant(mech, economy, request):
    e = request.getfixturevalue(economy)
    for i in range(e.n):
        result = best_response_search(e, i, mech, cfg=SMALL)
        assert result.dominant
        assert result.max_gain <= 1e-9


def test_gcsp_has_no_dominant_bid(example4):
    result = best_response_search(example4, 0, 'GCSP', cfg=SMALL)
    assert result.prescribed_bid is None
    assert not result.dominant
    assert len(set(round(b, 6) for b in result.profile_best_bids)) > 1


def test_best_response_explicit_profiles(example4):
    # Against an opponent bidding 3, winning under GCSP costs a penalty of 3 and still pays.
    result = best_response_search(example4, 0, 'GCSP', cfg=SMALL, profiles=[[3.0]])
    assert result.best_value == pytest.approx(4.8 - 3 * 0.2, abs=1e-9)
    assert result.best_bid > 3.0


@settings(max_examples=10, deadline=None)
@given(e=economies())
def test_random_economies_have_no_profitable_deviation(e):
    for i in range(e.n):
        assert best_response_search(e, i, '2BPB', cfg=OracleConfig(grid_points=201, n_profiles=4)).dominant


def test_best_response_rejects_bad_input(example4):
    with pytest.raises(ValueError):
        best_response_search(example4, 0, 'FCFS')
    with pytest.raises(ValueError):
        best_response_search(example4, 2, '2BPB')
    with pytest.raises(ValueError):
        best_response_search(example4, 0, '2BPB', cfg=OracleConfig(max_agents=1))


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def test_monte_carlo_matches_closed_form(example4, rng):
    outcome = run_two_bid(example4, rng)
    expected = evaluate(example4, outcome)
    sampled = mc_outcome_check(example4, outcome, OracleConfig(mc_samples=200_000, seed=1))
    assert sampled.samples == 200_000
    assert abs(sampled.utilization - expected.utilization) <= 5 * sampled.utilization_se
    assert abs(sampled.welfare - expected.welfare) <= 5 * sampled.welfare_se
    assert abs(sampled.revenue - expected.revenue) <= 5 * sampled.revenue_se


def test_monte_carlo_continuous_model(uniform_naive):
    e = Economy(agents=[uniform_naive], m=1)
    outcome = run_fcfs(e, 1.0, np.random.default_rng(0))
    sampled = mc_outcome_check(e, outcome, OracleConfig(mc_samples=100_000))
    assert abs(sampled.welfare - 0.75) <= 5 * sampled.welfare_se
    assert abs(sampled.utilization - 0.5) <= 5 * sampled.utilization_se


def test_monte_carlo_cipi_below_threshold_never_shows(example7, rng):
    # Penalty 3 sits below c - beta*w = 3.5 for the naive winner.
    outcome = run_two_bid(example7, rng)
    assert outcome.allocated == {0}
    sampled = mc_outcome_check(example7, outcome, OracleConfig(mc_samples=50_000, seed=2))
    assert sampled.utilization == 0.0
    assert sampled.welfare == 0.0
    assert sampled.revenue == pytest.approx(3.0, abs=1e-12)
    assert sampled.utilization_se == 0.0


def test_monte_carlo_needs_samples(example4, rng):
    with pytest.raises(ValueError):
        mc_outcome_check(example4, run_two_bid(example4, rng), OracleConfig(mc_samples=100))


def test_isfinite_bracket(exponential_naive):
    assert math.isfinite(bracket_bound(exponential_naive))
