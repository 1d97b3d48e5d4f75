import math

from .. import agent_types, datatypes
from ..datatypes import CiPi, Exponential, Uniform


def welfare_at_penalty(a: datatypes.AgentType, z: float) -> float:
    """Expected value E[(V + w) 1{show}] an allocated agent creates at penalty z.

    The show decision uses the true bias. Penalties are transfers and do not
    enter welfare.
    """
    if z < 0:
        raise ValueError(f"Penalty z must be non-negative, got {z}")
    w = a.w
    s = z + a.beta * w
    match a.model:
        case CiPi(c=c, p=p):
            return (w - c) * p if z >= c - a.beta * w else 0.0
        case Exponential(lam=lam):
            return w - 1 / lam + math.exp(-lam * s) * (1 / lam - w + s)
        case Uniform(alpha=alpha):
            if s >= alpha:
                return w - alpha / 2
            return (s / alpha) * (w - s / 2)
    raise TypeError(f"Unknown value model: {type(a.model).__name__}")


def _check_consistent(e: datatypes.Economy, o: datatypes.MechanismOutcome) -> None:
    if len(o.payments) != e.n:
        raise ValueError(
            f"Outcome of {o.mechanism} carries {len(o.payments)} payments for {e.n} agents"
        )
    if len(o.allocated) > e.m:
        raise ValueError(
            f"Outcome of {o.mechanism} allocates {len(o.allocated)} agents but m={e.m}"
        )
    stray = [i for i in o.allocated if not 0 <= i < e.n]
    if stray:
        raise ValueError(f"Outcome of {o.mechanism} allocates unknown agents {stray}")
    for i, payment in enumerate(o.payments):
        if i not in o.allocated and (payment.penalty != 0 or payment.base != 0):
            raise ValueError(f"Outcome of {o.mechanism} charges non-allocated agent {i}")


def evaluate_agent(
    a: datatypes.AgentType,
    payment: datatypes.TwoPartPayment,
) -> datatypes.AgentMetrics:
    z = payment.penalty
    usage = agent_types.show_prob(a, z, believed=False)
    return datatypes.AgentMetrics(
        allocated=True,
        usage=usage,
        welfare=welfare_at_penalty(a, z),
        subjective_utility=agent_types.subjective_utility(a, z) - payment.base,
        true_utility=agent_types.expected_utility(a, z) - payment.base,
        revenue=payment.base + z * (1 - usage),
    )


def evaluate(
    e: datatypes.Economy,
    o: datatypes.MechanismOutcome,
) -> datatypes.OutcomeMetrics:
    """Expected utilization, welfare and revenue of an outcome, with per-agent breakdown."""
    _check_consistent(e, o)
    per_agent = [
        evaluate_agent(a, o.payments[i]) if i in o.allocated else datatypes.AgentMetrics()
        for i, a in enumerate(e.agents)
    ]
    return datatypes.OutcomeMetrics(
        utilization=math.fsum(x.usage for x in per_agent),
        welfare=math.fsum(x.welfare for x in per_agent),
        revenue=math.fsum(x.revenue for x in per_agent),
        per_agent=per_agent,
    )
