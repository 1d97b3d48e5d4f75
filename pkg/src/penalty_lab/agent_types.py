# -*- coding:utf-8 -*-
"""
Closed-form penalty curves of present-biased agents.

Every function takes an :class:`AgentType`. ``believed=False`` evaluates a
curve with the true bias ``beta`` (what actually happens in period 1),
``believed=True`` with ``betahat`` (what the agent expects in period 0).
"""
import math
from typing import Optional, Tuple

import numpy as np

from .datatypes import AgentType, CiPi, Exponential, Uniform


def bias(a: AgentType, believed: bool) -> float:
    return a.betahat if believed else a.beta


def _check_penalty(z: float, name: str = 'z') -> None:
    if z < 0:
        raise ValueError(f"Penalty {name} must be non-negative, got {z}")


def _unknown(model) -> TypeError:
    return TypeError(f"Unknown value model: {type(model).__name__}")


def show_prob(a: AgentType, z: float, believed: bool = False) -> float:
    """P[V + b*w >= -z]: probability an allocated agent uses the resource at penalty z."""
    b = bias(a, believed)
    s = z + b * a.w
    match a.model:
        case CiPi(c=c, p=p):
            return p if z >= c - b * a.w else 0.0
        case Exponential(lam=lam):
            return max(0.0, -math.expm1(-lam * s))
        case Uniform(alpha=alpha):
            return min(max(s / alpha, 0.0), 1.0)
    raise _unknown(a.model)


def utility_at_penalty(a: AgentType, z: float, believed: bool) -> float:
    """Expected utility E[(V + w) 1{show}] - z P[no show] with the show decision taken under bias b.

    Negative ``z`` (a show-up reward) is accepted here so that oracle tests can
    probe the curves outside the mechanisms' domain.
    """
    b = bias(a, believed)
    w = a.w
    s = z + b * w
    match a.model:
        case CiPi(c=c, p=p):
            if z < c - b * w:
                return -z
            return (w - c) * p - z * (1 - p)
        case Exponential(lam=lam):
            if s < 0:
                return -z
            return w - 1 / lam + math.exp(-lam * s) * (1 / lam - (1 - b) * w)
        case Uniform(alpha=alpha):
            if s < 0:
                return -z
            if s >= alpha:
                return w - alpha / 2
            return (s / alpha) * (w - s / 2) - z * (alpha - s) / alpha
    raise _unknown(a.model)


def expected_utility(a: AgentType, z: float) -> float:
    """u(z): realised expected utility, decisions taken with the true bias."""
    _check_penalty(z)
    return utility_at_penalty(a, z, believed=False)


def subjective_utility(a: AgentType, z: float) -> float:
    """ûhat(z): the expected utility the agent anticipates in period 0."""
    _check_penalty(z)
    return utility_at_penalty(a, z, believed=True)


def _jump_point(a: AgentType) -> float:
    assert isinstance(a.model, CiPi)
    return a.model.c - a.betahat * a.w


def sup_utility(a: AgentType, z_min: float) -> float:
    """Ûhat(z_min) = sup over z >= z_min of ûhat(z)."""
    _check_penalty(z_min, 'z_min')
    here = subjective_utility(a, z_min)
    match a.model:
        case CiPi():
            return max(here, subjective_utility(a, max(z_min, _jump_point(a))))
        case Exponential():
            return here
        case Uniform(alpha=alpha):
            # ûhat is a parabola up to z = alpha - betahat*w, then flat at w - alpha/2.
            return max(here, a.w - alpha / 2)
    raise _unknown(a.model)


def max_acceptable_penalty(a: AgentType) -> float:
    """z^0: the zero-crossing of Ûhat, and the dominant first bid under 2BPB."""
    w, bh = a.w, a.betahat
    match a.model:
        case CiPi(c=c, p=p):
            z_hat = (w - c) * p / (1 - p)
            return z_hat if c - bh * w <= z_hat else 0.0
        case Exponential(lam=lam):
            z0 = -bh * w + math.log((1 - lam * w * (1 - bh)) / (1 - lam * w)) / lam
            return max(z0, 0.0)
        case Uniform(alpha=alpha):
            disc = alpha ** 2 - 2 * alpha * w + ((1 - bh) * w) ** 2
            return max(alpha - w - math.sqrt(disc), 0.0)
    raise _unknown(a.model)


def preferred_penalty(a: AgentType, z_min: float) -> float:
    """Smallest maximiser of ûhat over [z_min, inf): the dominant second bid."""
    _check_penalty(z_min, 'z_min')
    match a.model:
        case CiPi():
            t = _jump_point(a)
            if z_min >= t:
                return z_min
            # Below the jump the agent only ever pays; compare paying z_min against the jump.
            return t if subjective_utility(a, t) > -z_min else z_min
        case Exponential():
            return z_min
        case Uniform(alpha=alpha):
            plateau = a.w - alpha / 2
            if subjective_utility(a, z_min) >= plateau:
                return z_min
            return max(z_min, alpha - a.betahat * a.w)
    raise _unknown(a.model)


def sp_bid(a: AgentType) -> float:
    """Bid in the (m+1)th price auction: the subjective value of a free option."""
    return subjective_utility(a, 0.0)


def is_participant(a: AgentType) -> bool:
    return sup_utility(a, 0.0) > 0


def sample_period1_value(a: AgentType, rng: np.random.Generator) -> Optional[float]:
    """One draw of the period-1 value. ``None`` marks a CiPi agent unable to show."""
    match a.model:
        case CiPi(c=c, p=p):
            return -c if rng.random() < p else None
        case Exponential(lam=lam):
            return -float(rng.exponential(1 / lam))
        case Uniform(alpha=alpha):
            return float(rng.uniform(-alpha, 0.0))
    raise _unknown(a.model)


def sample_period1_values(
    a: AgentType,
    rng: np.random.Generator,
    size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised draws. Returns ``(values, able)``; ``values`` is meaningless where ``able`` is False."""
    match a.model:
        case CiPi(c=c, p=p):
            able = rng.random(size) < p
            return np.full(size, -c, dtype=float), able
        case Exponential(lam=lam):
            return -rng.exponential(1 / lam, size), np.ones(size, dtype=bool)
        case Uniform(alpha=alpha):
            return rng.uniform(-alpha, 0.0, size), np.ones(size, dtype=bool)
    raise _unknown(a.model)
