import logging

import numpy as np

from .. import agent_types, datatypes
from ..constants import FCFS
from .base import BaseMechanism


logger = logging.getLogger(__name__)


def run_fcfs(
    e: datatypes.Economy,
    fixed_penalty: float,
    rng: np.random.Generator,
) -> datatypes.MechanismOutcome:
    """First come first serve at a posted no-show penalty.

    Agents arrive in uniformly random order and take a resource iff they
    expect non-negative utility at the posted penalty. Decliners do not hold
    up later arrivals.
    """
    if fixed_penalty < 0:
        raise ValueError(f"FCFS penalty must be non-negative, got {fixed_penalty}")
    arrivals = rng.permutation(e.n).tolist()

    allocated = []
    for i in arrivals:
        if len(allocated) == e.m:
            break
        if agent_types.subjective_utility(e.agents[i], fixed_penalty) >= 0:
            allocated.append(i)

    payments = [
        datatypes.TwoPartPayment(penalty=fixed_penalty if i in allocated else 0.0)
        for i in range(e.n)
    ]
    logger.debug(f"[{FCFS}] penalty={fixed_penalty:g} allocated={sorted(allocated)}")
    return datatypes.MechanismOutcome(
        mechanism=FCFS,
        allocated=frozenset(allocated),
        payments=payments,
        order=arrivals,
    )


class FirstComeFirstServe(BaseMechanism):
    name = FCFS

    def __init__(self, fixed_penalty: float):
        if fixed_penalty < 0:
            raise ValueError(f"FCFS penalty must be non-negative, got {fixed_penalty}")
        self.fixed_penalty = float(fixed_penalty)

    @property
    def penalty(self):
        return self.fixed_penalty

    def run(self, economy, rng):
        return run_fcfs(economy, self.fixed_penalty, rng)
