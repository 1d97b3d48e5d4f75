import numpy as np
import pytest
from pydantic import ValidationError

from penalty_lab import AgentType, Economy, Exponential, MechanismOutcome, TwoPartPayment
from penalty_lab.mechanisms import (
    ContingentSecondPrice,
    FirstComeFirstServe,
    MPlusOneAuction,
    TwoBidPenaltyBidding,
    build_mechanisms,
    clearing_bid,
    rank,
    run_fcfs,
    run_gcsp,
    run_mplus1_auction,
    run_two_bid,
)


def test_two_bid_example4(example4, rng):
    o = run_two_bid(example4, rng)
    assert o.first_bids == pytest.approx([24.0, 4.0])
    assert o.allocated == {0}
    assert o.min_penalty == pytest.approx(4.0)
    assert o.second_bids == pytest.approx({0: 4.0})
    assert o.payments[0] == TwoPartPayment(base=0.0, penalty=4.0)
    assert o.payments[1] == TwoPartPayment()


def test_mplus1_example4(example4, rng):
    o = run_mplus1_auction(example4, rng)
    assert o.allocated == {1}
    assert o.payments[1].base == 0.0
    assert o.payments[1].penalty == 0.0


def test_mplus1_example7_price(example7, rng):
    o = run_mplus1_auction(example7, rng)
    assert o.first_bids == pytest.approx([2.0, 2.5])
    assert o.allocated == {1}
    assert o.payments[1].base == pytest.approx(2.0)


def test_two_bid_example7_naive_winner(example7, rng):
    o = run_two_bid(example7, rng)
    assert o.allocated == {0}
    assert o.payments[0].penalty == pytest.approx(3.0)


def test_two_bid_skips_non_participants(cipi_non_participant, example4, rng):
    e = Economy(agents=[cipi_non_participant, *example4.agents], m=3)
    o = run_two_bid(e, rng)
    assert o.allocated == {1, 2}
    assert 0 not in o.order
    assert o.first_bids[0] == 0.0
    assert o.min_penalty == 0.0


def test_two_bid_everyone_wins_when_resources_suffice(example4, rng):
    e = example4.model_copy(update={'m': 2})
    o = run_two_bid(e, rng)
    assert o.allocated == {0, 1}
    assert o.min_penalty == 0.0
    # Agent 1 moves up to its show threshold; agent 2 keeps the free option.
    assert o.second_bids[0] == pytest.approx(2.0)
    assert o.second_bids[1] == 0.0


def test_ties_are_broken_uniformly():
    a = AgentType(model=Exponential(lam=0.2), w=2.5, beta=0.5, betahat=1.0)
    e = Economy(agents=[a, a], m=1)
    winners = [next(iter(run_two_bid(e, np.random.default_rng(seed)).allocated)) for seed in range(400)]
    assert 150 < winners.count(0) < 250


def test_rank_and_clearing_bid(rng):
    bids = [1.0, 3.0, 2.0]
    order = rank(bids, rng)
    assert order == [1, 2, 0]
    assert clearing_bid(bids, order, 1) == 2.0
    assert clearing_bid(bids, order, 3) == 0.0


def test_gcsp_charges_highest_losing_bid(rng):
    o = run_gcsp([3.0, 1.0, 2.0], 1, rng)
    assert o.allocated == {0}
    assert o.payments[0].penalty == 2.0
    assert o.payments[1].penalty == 0.0


def test_gcsp_rejects_bad_input(rng):
    with pytest.raises(ValueError):
        run_gcsp([1.0, 2.0], 0, rng)
    with pytest.raises(ValueError):
        run_gcsp([1.0, float('nan')], 1, rng)


def test_fcfs_acceptance(example8, rng):
    declines = Economy(agents=[example8.agents[0]], m=1)
    assert run_fcfs(declines, 12.0, rng).allocated == frozenset()
    assert run_fcfs(declines, 8.0, rng).allocated == {0}


def test_fcfs_decliners_do_not_block(example8, cipi_non_participant, rng):
    # Only agent 1 accepts a penalty of 9.
    e = Economy(agents=[cipi_non_participant, example8.agents[0], cipi_non_participant], m=1)
    for seed in range(10):
        o = run_fcfs(e, 9.0, np.random.default_rng(seed))
        assert o.allocated == {1}
        assert o.payments[1].penalty == 9.0


def test_fcfs_zero_penalty_fills_resources(example4, rng):
    e = example4.model_copy(update={'m': 1})
    o = run_fcfs(e, 0.0, rng)
    assert len(o.allocated) == 1
    assert sorted(o.order) == [0, 1]


def test_fcfs_negative_penalty(example4, rng):
    with pytest.raises(ValueError):
        run_fcfs(example4, -1.0, rng)
    with pytest.raises(ValueError):
        FirstComeFirstServe(-1.0)


def test_outcome_validation():
    with pytest.raises(ValidationError):
        MechanismOutcome(
            mechanism='2BPB',
            allocated=frozenset({0}),
            payments=[TwoPartPayment(penalty=1.0), TwoPartPayment()],
            second_bids={0: 1.0},
            min_penalty=2.0,
        )
    with pytest.raises(ValidationError):
        MechanismOutcome(
            mechanism='FCFS',
            allocated=frozenset({0}),
            payments=[TwoPartPayment(), TwoPartPayment(penalty=1.0)],
        )


def test_build_mechanisms():
    mechanisms = build_mechanisms(['2BPB', 'MPlus1', 'FCFS', 'FirstBestWelfare'], [5.0, 0.0])
    assert [type(m) for m in mechanisms] == [
        TwoBidPenaltyBidding, MPlusOneAuction, FirstComeFirstServe, FirstComeFirstServe
    ]
    assert [m.penalty for m in mechanisms] == [None, None, 5.0, 0.0]
    assert repr(mechanisms[2]) == 'FirstComeFirstServe(penalty=5)'


def test_mechanism_classes_match_functions(example8):
    for mechanism, run in ((TwoBidPenaltyBidding(), run_two_bid), (MPlusOneAuction(), run_mplus1_auction)):
        assert mechanism.run(example8, np.random.default_rng(3)) == run(example8, np.random.default_rng(3))
    gcsp = ContingentSecondPrice().run(example8, np.random.default_rng(3))
    assert gcsp.allocated == {0}
    assert gcsp.payments[0].penalty == pytest.approx(7.5)
