from typing import List, Sequence

from ..constants import FCFS, M_PLUS_ONE, TWO_BID
from .base import BaseMechanism, clearing_bid, rank
from .auctions import (
    ContingentSecondPrice,
    MPlusOneAuction,
    TwoBidPenaltyBidding,
    run_gcsp,
    run_mplus1_auction,
    run_two_bid,
)
from .fcfs import FirstComeFirstServe, run_fcfs


def build_mechanisms(
    mechanism_ids: Sequence[str],
    fcfs_penalties: Sequence[float] = (),
) -> List[BaseMechanism]:
    """Instantiate the allocating mechanisms named in ``mechanism_ids``; benchmark ids are skipped.

    FCFS expands to one mechanism per penalty, in the given order.
    """
    mechanisms = []
    for mechanism_id in mechanism_ids:
        if mechanism_id == TWO_BID:
            mechanisms.append(TwoBidPenaltyBidding())
        elif mechanism_id == M_PLUS_ONE:
            mechanisms.append(MPlusOneAuction())
        elif mechanism_id == FCFS:
            mechanisms.extend(FirstComeFirstServe(z) for z in fcfs_penalties)
    return mechanisms
