"""
Grid and root-finding oracles.

These recompute suprema, zero-crossings, first-best values and best
responses by brute force over penalty grids, touching the closed forms only
through the pointwise curves ûhat(z), sw(z) and the show probability.
"""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .. import agent_types, datatypes
from ..constants import DSE_TOLERANCE, GCSP, M_PLUS_ONE, TWO_BID
from ..datatypes import CiPi, Exponential, Uniform
from ..metrics.outcome import welfare_at_penalty
from .quadrature import quad_subjective_utility


logger = logging.getLogger(__name__)


class NoSignChangeError(ValueError):
    pass


def _u_hat(a: datatypes.AgentType, z: float) -> float:
    return agent_types.utility_at_penalty(a, z, believed=True)


def _jump(a: datatypes.AgentType, believed: bool = True) -> Optional[float]:
    """Penalty where a CiPi agent starts to show; None for continuous models."""
    if isinstance(a.model, CiPi):
        return a.model.c - agent_types.bias(a, believed) * a.w
    return None


def bracket_bound(a: datatypes.AgentType) -> float:
    """A penalty beyond which Ûhat is certainly negative."""
    w = a.w
    match a.model:
        case CiPi(c=c, p=p):
            return 2 * (w - c) * p / (1 - p) + c + 1
        case Exponential(lam=lam):
            z0 = agent_types.max_acceptable_penalty(a)
            return 2 * z0 + 1 if math.isfinite(z0) else 50 / lam
        case Uniform(alpha=alpha):
            return alpha + 1
    raise TypeError(f"Unknown value model: {type(a.model).__name__}")


def _scale(a: datatypes.AgentType) -> float:
    match a.model:
        case CiPi(c=c):
            return c
        case Exponential(lam=lam):
            return 1 / lam
        case Uniform(alpha=alpha):
            return alpha
    raise TypeError(f"Unknown value model: {type(a.model).__name__}")


def _with_jump(grid: np.ndarray, a: datatypes.AgentType, believed: bool = True) -> np.ndarray:
    t = _jump(a, believed)
    if t is not None and grid[0] <= t <= grid[-1]:
        grid = np.union1d(grid, [t])
    return grid


def _left_edge(f, lo: float, hi: float, level: float, tol: float) -> float:
    """Smallest z in (lo, hi] with f(z) >= level, given f(lo) < level <= f(hi)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= level:
            hi = mid
        else:
            lo = mid
    return hi


def grid_sup(
    a: datatypes.AgentType,
    z_min: float,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> datatypes.GridSup:
    """sup over z >= z_min of ûhat(z) and its smallest attaining z."""
    if z_min < 0:
        raise ValueError(f"z_min must be non-negative, got {z_min}")
    grid = np.linspace(z_min, z_min + bracket_bound(a), cfg.grid_points)
    grid = _with_jump(grid, a)
    values = np.array([_u_hat(a, z) for z in grid])
    i = int(np.argmax(values))
    best_z, best = float(grid[i]), float(values[i])

    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
    if hi > lo:
        res = minimize_scalar(lambda z: -_u_hat(a, z), bounds=(lo, hi), method='bounded',
                              options={'xatol': cfg.root_tol})
        if -res.fun > best + 1e-12:
            best_z, best = float(res.x), float(-res.fun)

    # Slide to the left end of a flat maximum.
    level = best - 1e-12
    reached = np.flatnonzero(values >= level)
    if values[0] >= level:
        best_z = z_min
    elif len(reached) and grid[reached[0]] <= best_z:
        j = int(reached[0])
        best_z = _left_edge(lambda z: _u_hat(a, z), float(grid[j - 1]), float(grid[j]),
                            level, cfg.root_tol)
    return datatypes.GridSup(value=best, argmax=best_z)


def _sup_on(a: datatypes.AgentType, lo: float, hi: float, tail: float, points: int = 65) -> float:
    grid = _with_jump(np.linspace(lo, hi, points), a)
    return max(max(_u_hat(a, z) for z in grid), tail)


def numeric_zero_crossing(
    a: datatypes.AgentType,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> float:
    """z^0 by bracketing the sign change of a grid Ûhat and bisecting the bracket."""
    grid = _with_jump(np.linspace(0.0, bracket_bound(a), cfg.grid_points), a)
    values = np.array([_u_hat(a, z) for z in grid])
    suffix_max = np.maximum.accumulate(values[::-1])[::-1]

    negative = np.flatnonzero(suffix_max < 0)
    if len(negative) == 0 or negative[0] == 0:
        raise NoSignChangeError(
            f"[ORACLE] Ûhat has no sign change on [0, {grid[-1]:.6g}] for {a!r}"
        )
    k = int(negative[0])
    lo, hi = float(grid[k - 1]), float(grid[k])
    tail = float(suffix_max[k])
    while hi - lo > cfg.root_tol:
        mid = 0.5 * (lo + hi)
        if _sup_on(a, mid, hi, tail) >= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cipi_participates(a: datatypes.AgentType, cfg: datatypes.OracleConfig) -> bool:
    t = _jump(a, believed=True)
    return quad_subjective_utility(a, max(t, 0.0), cfg) >= 0


def grid_first_best(
    a: datatypes.AgentType,
    objective: datatypes.Objective,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
    allow_transfers: bool = False,
) -> datatypes.GridSup:
    """Per-agent first best by grid search.

    Welfare: max of sw(z) over z >= 0. Utilization: max show probability over
    penalties with sw(z) >= 0, with the feasibility boundary found by brentq.
    """
    upper = cfg.z_max_factor * (a.w + _scale(a)) + 1

    if objective == 'welfare':
        if isinstance(a.model, CiPi) and not (allow_transfers or _cipi_participates(a, cfg)):
            return datatypes.GridSup(value=0.0, argmax=0.0)
        grid = _with_jump(np.linspace(0.0, upper, cfg.grid_points), a, believed=False)
        values = np.array([welfare_at_penalty(a, z) for z in grid])
        i = int(np.argmax(values))
        best_z, best = float(grid[i]), float(values[i])
        lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
        if hi > lo:
            res = minimize_scalar(lambda z: -welfare_at_penalty(a, z), bounds=(lo, hi),
                                  method='bounded', options={'xatol': cfg.root_tol})
            if -res.fun > best:
                best_z, best = float(res.x), float(-res.fun)
        return datatypes.GridSup(value=best, argmax=best_z)

    if objective != 'utilization':
        raise ValueError(f"objective must be 'welfare' or 'utilization', got {objective!r}")

    def usage(z):
        return agent_types.show_prob(a, z, believed=False)

    for _ in range(60):
        if welfare_at_penalty(a, upper) < 0 or usage(2 * upper) <= usage(upper):
            break
        upper *= 2
    grid = _with_jump(np.linspace(0.0, upper, cfg.grid_points), a, believed=False)
    sw = np.array([welfare_at_penalty(a, z) for z in grid])
    show = np.array([usage(z) for z in grid])
    feasible = np.flatnonzero(sw >= 0)
    k = int(feasible[-1])
    best_z, best = float(grid[k]), float(show[k])
    if k + 1 < len(grid):
        boundary = brentq(lambda z: welfare_at_penalty(a, z), grid[k], grid[k + 1],
                          xtol=cfg.root_tol)
        if usage(boundary) >= best and welfare_at_penalty(a, boundary) >= -1e-12:
            best_z, best = float(boundary), usage(boundary)
    # Smallest penalty with the same usage.
    reached = np.flatnonzero(show[:k + 1] >= best)
    if len(reached) and grid[reached[0]] < best_z:
        j = int(reached[0])
        best_z = float(grid[j])
        if j > 0:
            best_z = _left_edge(usage, float(grid[j - 1]), best_z, best, cfg.root_tol)
    return datatypes.GridSup(value=best, argmax=best_z)


# ---------------------------------------------------------------------------
# Best responses
# ---------------------------------------------------------------------------

def _allocation_probability(bids: np.ndarray, opponents: np.ndarray, m: int) -> np.ndarray:
    """Chance of winning a resource for each own bid, ties split uniformly."""
    above = (opponents[None, :] > bids[:, None]).sum(axis=1)
    level = (opponents[None, :] == bids[:, None]).sum(axis=1)
    prob = np.minimum(1.0, (m - above) / (level + 1.0))
    return np.where(above >= m, 0.0, prob)


def _clearing_price(opponents: np.ndarray, m: int) -> float:
    """(m+1)th highest bid when the agent is among the top m: the m-th highest opponent bid."""
    if len(opponents) < m:
        return 0.0
    return float(np.sort(opponents)[::-1][m - 1])


class _SecondRound:
    """Grid Ûhat(z_min): best ûhat over second-round grid points at or above z_min."""

    def __init__(self, a: datatypes.AgentType, grid: np.ndarray):
        self.a = a
        self.grid = np.unique(grid)
        values = np.array([_u_hat(a, z) for z in self.grid])
        self.suffix_max = np.maximum.accumulate(values[::-1])[::-1]

    def __call__(self, z_min: float) -> float:
        best = _u_hat(self.a, z_min)
        j = int(np.searchsorted(self.grid, z_min, side='left'))
        if j < len(self.grid):
            best = max(best, float(self.suffix_max[j]))
        return best


def _prescribed_bid(a: datatypes.AgentType, mech: str) -> Optional[float]:
    if mech == TWO_BID:
        return agent_types.max_acceptable_penalty(a) if agent_types.is_participant(a) else 0.0
    if mech == M_PLUS_ONE:
        return agent_types.sp_bid(a)
    return None


def _adversarial_levels(a: datatypes.AgentType, mech: str) -> List[float]:
    if mech == M_PLUS_ONE:
        anchors = [agent_types.sp_bid(a)]
    else:
        anchors = [agent_types.max_acceptable_penalty(a)]
        t = _jump(a)
        if t is not None:
            anchors.append(t)
    levels = [0.0]
    for x in anchors:
        delta = 1e-6 * (1 + abs(x))
        levels.extend([x - delta, x, x + delta])
    return sorted({x for x in levels if x >= 0})


def best_response_search(
    e: datatypes.Economy,
    i: int,
    mech: str,
    bid_grid: Optional[Sequence[float]] = None,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
    profiles: Optional[Sequence[Sequence[float]]] = None,
) -> datatypes.BestResponseResult:
    """Search agent i's bids against opponent-bid profiles.

    The prescribed bid is z^0 under 2BPB and ûhat(0) under the (m+1)th price
    auction. ``dominant`` tells whether it is within tolerance of the best bid
    in every profile. GCSP prescribes nothing; there the least-regret bid is
    reported and ``dominant`` tells whether any single bid is optimal in every
    profile.
    """
    if mech not in (TWO_BID, M_PLUS_ONE, GCSP):
        raise ValueError(f"best_response_search supports 2BPB, MPlus1 and GCSP, got {mech!r}")
    if e.n > cfg.max_agents:
        raise ValueError(f"Economy has {e.n} agents, best_response_search allows {cfg.max_agents}")
    if not 0 <= i < e.n:
        raise ValueError(f"Agent index {i} out of range for {e.n} agents")

    a, m = e.agents[i], e.m
    prescribed = _prescribed_bid(a, mech)
    reference = prescribed if prescribed is not None else agent_types.max_acceptable_penalty(a)
    if mech == M_PLUS_ONE:
        upper = cfg.z_max_factor * (1 + reference)
    else:
        upper = cfg.z_max_factor * bracket_bound(a)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(i,)))

    if profiles is None:
        others = [b for b in range(e.n) if b != i]
        equilibrium = [_prescribed_bid(e.agents[b], mech) for b in others]
        profiles = [] if None in equilibrium else [equilibrium]
        profiles += [rng.uniform(0.0, upper, e.n - 1).tolist() for _ in range(cfg.n_profiles)]
        profiles += [[x] * (e.n - 1) for x in _adversarial_levels(a, mech)]
    profiles = [np.asarray(p, dtype=float) for p in profiles]

    if bid_grid is None:
        bid_grid = np.linspace(0.0, upper, min(cfg.grid_points, 201))
    candidates = set(float(b) for b in bid_grid)
    for p in profiles:
        for x in p:
            delta = 1e-7 * (1 + abs(x))
            candidates.update(b for b in (x - delta, x, x + delta) if b >= 0)
    if prescribed is not None:
        candidates.add(prescribed)
    candidates = np.array(sorted(candidates))

    second_round = None
    if mech == TWO_BID:
        second_grid = _with_jump(
            np.union1d(np.linspace(0.0, upper, min(cfg.grid_points, 2001)), candidates), a
        )
        second_round = _SecondRound(a, second_grid)

    def allocated_value(price: float, exact: bool) -> float:
        if mech == TWO_BID:
            if exact:
                return _u_hat(a, agent_types.preferred_penalty(a, price))
            return second_round(price)
        if mech == M_PLUS_ONE:
            return _u_hat(a, 0.0) - price
        return _u_hat(a, max(price, 0.0))

    table = np.empty((len(profiles), len(candidates)))
    prescribed_values = np.zeros(len(profiles))
    for row, opponents in enumerate(profiles):
        price = _clearing_price(opponents, m)
        table[row] = _allocation_probability(candidates, opponents, m) * allocated_value(price, False)
        if prescribed is not None:
            if mech == TWO_BID and not agent_types.is_participant(a):
                prescribed_values[row] = 0.0
            else:
                prob = _allocation_probability(np.array([prescribed]), opponents, m)[0]
                prescribed_values[row] = prob * allocated_value(price, True)

    profile_best = table.max(axis=1)
    profile_best_bids = [
        float(candidates[np.flatnonzero(row >= best - DSE_TOLERANCE)[0]])
        for row, best in zip(table, profile_best)
    ]

    if prescribed is not None:
        gains = table - prescribed_values[:, None]
        row, col = np.unravel_index(int(np.argmax(gains)), gains.shape)
        max_gain = float(gains[row, col])
        result = datatypes.BestResponseResult(
            mechanism=mech, agent=i, prescribed_bid=prescribed,
            best_bid=float(candidates[col]), best_value=float(table[row, col]),
            max_gain=max_gain, dominant=max_gain <= DSE_TOLERANCE,
            profile_best_bids=profile_best_bids,
        )
    else:
        regret = (profile_best[:, None] - table).max(axis=0)
        col = int(np.argmin(regret))
        result = datatypes.BestResponseResult(
            mechanism=mech, agent=i, prescribed_bid=None,
            best_bid=float(candidates[col]), best_value=float(table[:, col].max()),
            max_gain=float(regret[col]), dominant=bool(regret[col] <= DSE_TOLERANCE),
            profile_best_bids=profile_best_bids,
        )
    logger.debug(
        f"[ORACLE] {mech} agent {i}: {len(profiles)} profiles x {len(candidates)} bids, "
        f"max_gain={result.max_gain:.3g} dominant={result.dominant}"
    )
    return result
