# -*- coding:utf-8 -*-
"""
Worked examples and oracle batteries.

Every check returns :class:`CheckResult` records; the CLI prints them and
fails the process if any check did not pass.
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import agent_types
from .constants import (
    BIAS_REGIMES,
    DSE_TOLERANCE,
    GCSP,
    M_PLUS_ONE,
    MODEL_FAMILIES,
    TWO_BID,
)
from .datatypes import (
    AgentType,
    CheckResult,
    CiPi,
    Economy,
    OracleConfig,
    PopulationSpec,
)
from .mechanisms import run_mplus1_auction, run_two_bid
from .metrics import evaluate, first_best_value, welfare_at_penalty
from .numeric_oracle import (
    best_response_search,
    grid_first_best,
    lambert_w_minus1,
    numeric_zero_crossing,
    quad_expected_utility,
    quad_subjective_utility,
    quad_welfare,
)
from .numeric_oracle.lambert import BRANCH_POINT
from .simulation import sample_economy
from .utils import derive_rng


logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-9
CURVE_TOLERANCE = 1e-6
FIRST_BEST_TOLERANCE = 1e-4

SUITES = ('curves', 'dse', 'firstbest', 'lambert', 'all')

# L per model family in the default populations.
POPULATION_SCALE = {'cipi': 10.0, 'exponential': 20.0, 'uniform': 20.0}


def _cipi(c, p, w, beta, betahat=None) -> AgentType:
    return AgentType(model=CiPi(c=c, p=p), w=w, beta=beta,
                     betahat=beta if betahat is None else betahat)


def example_economies() -> Dict[str, Economy]:
    """Single-resource, two-agent CiPi economies of the worked examples."""
    return {
        # Sophisticated agent 1 beats a sophisticated agent 2 under 2BPB.
        'example4': Economy(m=1, agents=[
            _cipi(10, 0.8, 16, 0.5),
            _cipi(6, 0.5, 10, 0.8),
        ]),
        # Naive agent 1 wins 2BPB but never shows up.
        'example7': Economy(m=1, agents=[
            _cipi(5, 0.8, 7.5, 0.2, 1.0),
            _cipi(5, 1 / 6, 20, 1.0),
        ]),
        # Sophisticated agent 1 wins 2BPB with higher welfare but lower utilization.
        'example8': Economy(m=1, agents=[
            _cipi(10, 0.5, 20, 0.2),
            _cipi(5, 0.6, 10, 1.0),
        ]),
    }


def _close(name: str, actual, expected, tol: float = EXACT_TOLERANCE) -> CheckResult:
    if isinstance(expected, (list, tuple)):
        passed = len(actual) == len(expected) and all(
            abs(x - y) <= tol for x, y in zip(actual, expected)
        )
    elif isinstance(expected, (set, frozenset)):
        passed = set(actual) == set(expected)
    else:
        passed = abs(actual - expected) <= tol
    return CheckResult(name=name, passed=passed, detail=f"got {actual}, expected {expected}")


def _mechanism_checks(
    name: str,
    e: Economy,
    run: Callable,
    allocated: set,
    bids: Sequence[float],
    welfare: float,
    utilization: float,
) -> List[CheckResult]:
    outcome = run(e, np.random.default_rng(0))
    metrics = evaluate(e, outcome)
    return [
        _close(f"{name}.bids", outcome.first_bids, list(bids)),
        _close(f"{name}.allocated", outcome.allocated, allocated),
        _close(f"{name}.welfare", metrics.welfare, welfare),
        _close(f"{name}.utilization", metrics.utilization, utilization),
    ]


def check_examples() -> List[CheckResult]:
    economies = example_economies()
    results = []

    e = economies['example4']
    results += _mechanism_checks('example4.2bpb', e, run_two_bid, {0}, [24, 4], 4.8, 0.8)
    outcome = run_two_bid(e, np.random.default_rng(0))
    results.append(_close('example4.2bpb.min_penalty', outcome.min_penalty, 4.0))
    results.append(_close('example4.2bpb.penalty', outcome.payments[0].penalty, 4.0))
    results.append(_close('example4.2bpb.revenue', evaluate(e, outcome).revenue, 0.8))
    results += _mechanism_checks('example4.mplus1', e, run_mplus1_auction, {1}, [0, 2], 2.0, 0.5)

    e = economies['example7']
    results += _mechanism_checks('example7.mplus1', e, run_mplus1_auction, {1}, [2, 2.5], 2.5, 1 / 6)
    outcome = run_mplus1_auction(e, np.random.default_rng(0))
    results.append(_close('example7.mplus1.price', outcome.payments[1].base, 2.0))
    results += _mechanism_checks('example7.2bpb', e, run_two_bid, {0}, [10, 3], 0.0, 0.0)
    outcome = run_two_bid(e, np.random.default_rng(0))
    results.append(_close('example7.2bpb.penalty', outcome.payments[0].penalty, 3.0))

    e = economies['example8']
    results += _mechanism_checks('example8.mplus1', e, run_mplus1_auction, {1}, [0, 3], 3.0, 0.6)
    results += _mechanism_checks('example8.2bpb', e, run_two_bid, {0}, [10, 7.5], 5.0, 0.5)

    results.append(check_gcsp_has_no_dominant_bid())
    return results


def check_gcsp_has_no_dominant_bid(cfg: OracleConfig = OracleConfig(grid_points=401)) -> CheckResult:
    """Under GCSP the sophisticated CiPi agent of example 4 wants z^0 or 0 depending on the other bid."""
    e = example_economies()['example4']
    result = best_response_search(e, 0, GCSP, cfg=cfg)
    distinct = sorted(set(round(b, 6) for b in result.profile_best_bids))
    return CheckResult(
        name='example3.gcsp.no_dominant_bid',
        passed=(not result.dominant) and len(distinct) > 1,
        detail=f"least regret {result.max_gain:.3g} at bid {result.best_bid:.6g}; "
               f"profile best bids span {distinct[0]:.6g}..{distinct[-1]:.6g}",
    )


def _population_agents(family: str, regime: str, samples: int, seed: int) -> List[AgentType]:
    spec = PopulationSpec(model_family=family, L=POPULATION_SCALE[family], bias_regime=regime)
    rng = derive_rng(seed, MODEL_FAMILIES.index(family), BIAS_REGIMES.index(regime))
    return sample_economy(spec, samples, 1, rng).agents


def _max_error(pairs) -> float:
    return max((abs(x - y) / (1 + abs(y)) for x, y in pairs), default=0.0)


def check_curves(samples: int = 200, seed: int = 0, cfg: OracleConfig = OracleConfig(grid_points=2001)) -> List[CheckResult]:
    """Closed-form curves and z^0 against quadrature and bisection."""
    results = []
    for family in MODEL_FAMILIES:
        for regime in BIAS_REGIMES:
            agents = _population_agents(family, regime, samples, seed)
            rng = derive_rng(seed, 99, MODEL_FAMILIES.index(family), BIAS_REGIMES.index(regime))
            curve_pairs, zero_pairs = [], []
            for a in agents:
                z0 = agent_types.max_acceptable_penalty(a)
                z = float(rng.uniform(0.0, 2 * z0 + 1))
                curve_pairs += [
                    (agent_types.subjective_utility(a, z), quad_subjective_utility(a, z, cfg)),
                    (agent_types.expected_utility(a, z), quad_expected_utility(a, z, cfg)),
                    (welfare_at_penalty(a, z), quad_welfare(a, z, cfg)),
                ]
                zero_pairs.append((z0, numeric_zero_crossing(a, cfg)))
            for what, pairs in (('curves', curve_pairs), ('zero_crossing', zero_pairs)):
                error = _max_error(pairs)
                results.append(CheckResult(
                    name=f"{what}.{family}.{regime}",
                    passed=error <= CURVE_TOLERANCE,
                    detail=f"max scaled error {error:.3g} over {len(agents)} types",
                ))
    return results


def check_first_best(samples: int = 200, seed: int = 0, cfg: OracleConfig = OracleConfig(grid_points=2001)) -> List[CheckResult]:
    results = []
    for family in MODEL_FAMILIES:
        for regime in BIAS_REGIMES:
            agents = _population_agents(family, regime, samples, seed)
            for objective in ('welfare', 'utilization'):
                error = _max_error(
                    (first_best_value(a, objective), grid_first_best(a, objective, cfg).value)
                    for a in agents
                )
                results.append(CheckResult(
                    name=f"first_best.{objective}.{family}.{regime}",
                    passed=error <= FIRST_BEST_TOLERANCE,
                    detail=f"max scaled error {error:.3g} over {len(agents)} types",
                ))
    return results


def check_dse(samples: int = 100, seed: int = 0, cfg: OracleConfig = OracleConfig(grid_points=201)) -> List[CheckResult]:
    """No bid beats the prescribed 2BPB and (m+1)th price bids by more than the tolerance."""
    results = []
    for family in MODEL_FAMILIES:
        rng = derive_rng(seed, 7, MODEL_FAMILIES.index(family))
        worst = {TWO_BID: -math.inf, M_PLUS_ONE: -math.inf}
        for _ in range(samples):
            regime = str(rng.choice(BIAS_REGIMES))
            spec = PopulationSpec(model_family=family, L=POPULATION_SCALE[family], bias_regime=regime)
            n, m = int(rng.integers(2, 7)), int(rng.integers(1, 3))
            e = sample_economy(spec, n, m, rng)
            for i in range(n):
                for mech in worst:
                    found = best_response_search(e, i, mech, cfg=cfg)
                    worst[mech] = max(worst[mech], found.max_gain)
        for mech, gain in worst.items():
            results.append(CheckResult(
                name=f"dse.{mech}.{family}",
                passed=gain <= DSE_TOLERANCE,
                detail=f"largest deviation gain {gain:.3g} over {samples} economies",
            ))
    results.append(check_gcsp_has_no_dominant_bid())
    return results


def check_lambert(points: int = 10_000) -> List[CheckResult]:
    magnitudes = np.logspace(-300, math.log10(-BRANCH_POINT), points)[:-1]
    worst = 0.0
    for x in -magnitudes:
        w = lambert_w_minus1(float(x))
        worst = max(worst, abs(w * math.exp(w) - x) / max(abs(x), 1e-300))
    at_branch = lambert_w_minus1(BRANCH_POINT)
    return [
        CheckResult(name='lambert.residual', passed=worst <= 1e-12,
                    detail=f"max relative residual {worst:.3g} over {points - 1} points"),
        CheckResult(name='lambert.branch_point', passed=abs(at_branch + 1) <= 1e-12,
                    detail=f"W(-1/e) = {at_branch!r}"),
    ]


# Types (or economies, for dse) drawn per model and bias regime when not given.
DEFAULT_SAMPLES = {'curves': 1000, 'firstbest': 1000, 'dse': 100}


def run_suite(name: str, samples: Optional[int] = None, seed: int = 0) -> List[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"Unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if samples is not None and samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    results = []
    for suite, check in (('curves', check_curves), ('firstbest', check_first_best), ('dse', check_dse)):
        if name in (suite, 'all'):
            results += check(samples or DEFAULT_SAMPLES[suite], seed)
    if name in ('lambert', 'all'):
        results += check_lambert()
    failed = sum(not r.passed for r in results)
    logger.info(f"[VERIFY] suite={name}: {len(results) - failed} passed, {failed} failed")
    return results
