import logging

import numpy as np

from .. import agent_types, datatypes
from ..metrics.aggregate import mean_and_se


logger = logging.getLogger(__name__)

MIN_SAMPLES = 10_000


def mc_outcome_check(
    e: datatypes.Economy,
    o: datatypes.MechanismOutcome,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> datatypes.MonteCarloMetrics:
    """Realise period 1 ``cfg.mc_samples`` times and tally utilization, welfare and revenue.

    An allocated agent shows iff it is able to and V + beta*w >= -z.
    """
    if cfg.mc_samples < MIN_SAMPLES:
        raise ValueError(f"mc_samples must be >= {MIN_SAMPLES}, got {cfg.mc_samples}")
    if len(o.payments) != e.n:
        raise ValueError(f"Outcome carries {len(o.payments)} payments for {e.n} agents")

    rng = np.random.default_rng(cfg.seed)
    size = cfg.mc_samples
    used = np.zeros(size)
    welfare = np.zeros(size)
    revenue = np.zeros(size)
    for i in sorted(o.allocated):
        a, payment = e.agents[i], o.payments[i]
        values, able = agent_types.sample_period1_values(a, rng, size)
        shows = able & (values >= -payment.penalty - a.beta * a.w)
        used += shows
        welfare += np.where(shows, values + a.w, 0.0)
        revenue += payment.base + np.where(shows, 0.0, payment.penalty)

    utilization, utilization_se = mean_and_se(used)
    welfare_mean, welfare_se = mean_and_se(welfare)
    revenue_mean, revenue_se = mean_and_se(revenue)
    logger.debug(
        f"[ORACLE] {o.mechanism} monte carlo: utilization={utilization:.4f}±{utilization_se:.1e}"
    )
    return datatypes.MonteCarloMetrics(
        samples=size,
        utilization=utilization,
        utilization_se=utilization_se,
        welfare=welfare_mean,
        welfare_se=welfare_se,
        revenue=revenue_mean,
        revenue_se=revenue_se,
    )
