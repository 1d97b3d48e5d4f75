"""
Full-information benchmarks.

Per agent, the first best picks the penalty that maximises welfare, or the
largest show probability that keeps expected welfare non-negative. Across
agents it allocates the m agents with the best per-agent values.
"""
import math
from typing import List, Optional

import numpy as np

from .. import agent_types, datatypes
from ..datatypes import CiPi, Exponential, Uniform
from ..mechanisms.base import rank
from ..numeric_oracle.lambert import lambert_w_minus1
from .outcome import welfare_at_penalty


def _cipi_participates(a: datatypes.AgentType) -> bool:
    c, p = a.model.c, a.model.p
    return c - a.betahat * a.w <= (a.w - c) * p / (1 - p)


def _exponential_utilization_w(a: datatypes.AgentType) -> float:
    x = a.model.lam * a.w - 1
    return lambert_w_minus1(x * math.exp(x))


def first_best_penalty(
    a: datatypes.AgentType,
    objective: datatypes.Objective,
    allow_transfers: bool = False,
) -> float:
    """Penalty at which the agent attains its first-best value for ``objective``."""
    w, beta = a.w, a.beta
    match a.model, objective:
        case CiPi(c=c), 'welfare':
            if not (allow_transfers or _cipi_participates(a)):
                return 0.0
            return max(c - beta * w, 0.0)
        case CiPi(c=c), 'utilization':
            return max(c - beta * w, 0.0)
        case (Exponential() | Uniform()), 'welfare':
            # Shows iff V + w >= 0.
            return (1 - beta) * w
        case Exponential(lam=lam), 'utilization':
            return (1 - beta) * w - (1 + _exponential_utilization_w(a)) / lam
        case Uniform(), 'utilization':
            return (2 - beta) * w
    raise ValueError(f"Unknown objective {objective!r} for {type(a.model).__name__}")


def first_best_value(
    a: datatypes.AgentType,
    objective: datatypes.Objective,
    allow_transfers: bool = False,
) -> float:
    w = a.w
    match a.model, objective:
        case CiPi(c=c, p=p), 'welfare':
            if not (allow_transfers or _cipi_participates(a)):
                return 0.0
            return (w - c) * p
        case CiPi(p=p), 'utilization':
            return p
        case Exponential(lam=lam), 'welfare':
            return w + math.expm1(-lam * w) / lam
        case Exponential(lam=lam), 'utilization':
            return -math.expm1(1 - lam * w + _exponential_utilization_w(a))
        case Uniform(alpha=alpha), 'welfare':
            return w ** 2 / (2 * alpha)
        case Uniform(alpha=alpha), 'utilization':
            return 2 * w / alpha
    raise ValueError(f"Unknown objective {objective!r} for {type(a.model).__name__}")


def first_best_agent(
    a: datatypes.AgentType,
    objective: datatypes.Objective,
    allow_transfers: bool = False,
) -> datatypes.FirstBestAgent:
    z = first_best_penalty(a, objective, allow_transfers)
    return datatypes.FirstBestAgent(
        value=first_best_value(a, objective, allow_transfers),
        penalty=z,
        welfare=welfare_at_penalty(a, z),
        usage=agent_types.show_prob(a, z, believed=False),
    )


def first_best(
    e: datatypes.Economy,
    objective: datatypes.Objective,
    rng: Optional[np.random.Generator] = None,
    allow_transfers: bool = False,
) -> datatypes.FirstBestResult:
    """Top-m first-best benchmark; equal per-agent values are ordered by ``rng`` (seed 0 if omitted)."""
    if objective not in ('welfare', 'utilization'):
        raise ValueError(f"objective must be 'welfare' or 'utilization', got {objective!r}")
    rng = np.random.default_rng(0) if rng is None else rng

    per_agent: List[datatypes.FirstBestAgent] = [
        first_best_agent(a, objective, allow_transfers) for a in e.agents
    ]
    selected = set(rank([x.value for x in per_agent], rng)[:e.m])
    per_agent = [
        x.model_copy(update={'selected': i in selected}) for i, x in enumerate(per_agent)
    ]
    chosen = [x for x in per_agent if x.selected]
    return datatypes.FirstBestResult(
        objective=objective,
        value=math.fsum(x.value for x in chosen),
        welfare=math.fsum(x.welfare for x in chosen),
        utilization=math.fsum(x.usage for x in chosen),
        per_agent=per_agent,
    )
