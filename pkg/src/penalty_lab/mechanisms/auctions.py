import logging
from typing import Sequence

import numpy as np

from .. import agent_types, datatypes
from ..constants import GCSP, M_PLUS_ONE, TWO_BID
from .base import BaseMechanism, clearing_bid, rank


logger = logging.getLogger(__name__)


def run_two_bid(
    e: datatypes.Economy,
    rng: np.random.Generator,
) -> datatypes.MechanismOutcome:
    """Two-bid penalty bidding.

    Round one ranks agents by their maximum acceptable penalty z^0 and
    allocates the top m. The (m+1)th first bid becomes the minimum penalty,
    and every winner picks its own penalty at or above it in round two.
    Agents who cannot gain from any penalty bid 0 and are never allocated.
    """
    participants = [agent_types.is_participant(a) for a in e.agents]
    first_bids = [
        agent_types.max_acceptable_penalty(a) if ok else 0.0
        for a, ok in zip(e.agents, participants)
    ]
    order = [i for i in rank(first_bids, rng) if participants[i]]
    min_penalty = clearing_bid(first_bids, order, e.m)
    allocated = order[:e.m]

    second_bids = {
        i: agent_types.preferred_penalty(e.agents[i], min_penalty) for i in allocated
    }
    payments = [
        datatypes.TwoPartPayment(penalty=second_bids.get(i, 0.0)) for i in range(e.n)
    ]
    logger.debug(
        f"[{TWO_BID}] allocated={sorted(allocated)} min_penalty={min_penalty:.6g} "
        f"skipped={participants.count(False)}"
    )
    return datatypes.MechanismOutcome(
        mechanism=TWO_BID,
        allocated=frozenset(allocated),
        payments=payments,
        first_bids=first_bids,
        second_bids=second_bids,
        min_penalty=min_penalty,
        order=order,
    )


def run_mplus1_auction(
    e: datatypes.Economy,
    rng: np.random.Generator,
) -> datatypes.MechanismOutcome:
    """(m+1)th price auction on the subjective value of a free option; no penalties."""
    bids = [agent_types.sp_bid(a) for a in e.agents]
    order = rank(bids, rng)
    price = clearing_bid(bids, order, e.m)
    allocated = order[:e.m]

    payments = [
        datatypes.TwoPartPayment(base=price if i in allocated else 0.0)
        for i in range(e.n)
    ]
    logger.debug(f"[{M_PLUS_ONE}] allocated={sorted(allocated)} price={price:.6g}")
    return datatypes.MechanismOutcome(
        mechanism=M_PLUS_ONE,
        allocated=frozenset(allocated),
        payments=payments,
        first_bids=bids,
        order=order,
    )


def run_gcsp(
    bids: Sequence[float],
    m: int,
    rng: np.random.Generator,
) -> datatypes.MechanismOutcome:
    """Generalised contingent second price: the top m bidders pay the highest losing bid on a no-show.

    Works on raw bids since the mechanism has no dominant bid to compute.
    """
    if m < 1:
        raise ValueError(f"Resource count m must be >= 1, got {m}")
    bids = [float(b) for b in bids]
    if not all(np.isfinite(bids)):
        raise ValueError(f"GCSP bids must be finite, got {bids}")
    order = rank(bids, rng)
    penalty = max(clearing_bid(bids, order, m), 0.0)
    allocated = order[:m]

    payments = [
        datatypes.TwoPartPayment(penalty=penalty if i in allocated else 0.0)
        for i in range(len(bids))
    ]
    logger.debug(f"[{GCSP}] allocated={sorted(allocated)} penalty={penalty:.6g}")
    return datatypes.MechanismOutcome(
        mechanism=GCSP,
        allocated=frozenset(allocated),
        payments=payments,
        first_bids=bids,
        min_penalty=penalty,
        order=order,
    )


class TwoBidPenaltyBidding(BaseMechanism):
    name = TWO_BID

    def run(self, economy, rng):
        return run_two_bid(economy, rng)


class MPlusOneAuction(BaseMechanism):
    name = M_PLUS_ONE

    def run(self, economy, rng):
        return run_mplus1_auction(economy, rng)


class ContingentSecondPrice(BaseMechanism):
    """GCSP with agents bidding a fixed rule of their type (z^0 unless told otherwise)."""
    name = GCSP

    def __init__(self, bid_rule=agent_types.max_acceptable_penalty):
        self.bid_rule = bid_rule

    def run(self, economy, rng):
        bids = [self.bid_rule(a) for a in economy.agents]
        return run_gcsp(bids, economy.m, rng)
