__version__ = '0.1.0'

from . import agent_types, constants, datatypes
from .datatypes import (
    AgentType,
    CiPi,
    Economy,
    ExperimentConfig,
    Exponential,
    MechanismOutcome,
    OracleConfig,
    PopulationSpec,
    ResultRow,
    TwoPartPayment,
    Uniform,
)
from .mechanisms import (
    FirstComeFirstServe,
    MPlusOneAuction,
    TwoBidPenaltyBidding,
    run_fcfs,
    run_gcsp,
    run_mplus1_auction,
    run_two_bid,
)
from .metrics import evaluate, first_best, first_best_penalty, welfare_at_penalty
from .simulation import equity_summary, run_experiment, sample_economy
