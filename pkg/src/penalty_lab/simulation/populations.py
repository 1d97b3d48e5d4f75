# -*- coding:utf-8 -*-
"""
Random economies drawn from the experiment populations.

Value models:
    exponential  1/lam ~ U[0, L], w ~ U[0, 1/lam]
    cipi         w ~ U[0, L], c ~ U[0, w], p ~ U[0, 1]
    uniform      alpha ~ U[0, L], w ~ U[0, alpha/2]

Draws on the boundary of a parameter range are redrawn.
"""
import logging
from typing import Tuple

import numpy as np

from .. import datatypes
from ..utils import derive_rng


logger = logging.getLogger(__name__)

MAX_REDRAWS = 1_000


def _draw_value_model(
    spec: datatypes.PopulationSpec,
    rng: np.random.Generator,
) -> Tuple[datatypes.ValueModel, float]:
    L = spec.L
    for _ in range(MAX_REDRAWS):
        if spec.model_family == 'exponential':
            mean_cost = rng.uniform(0.0, L)
            w = rng.uniform(0.0, mean_cost)
            lam = 1 / mean_cost if mean_cost > 0 else 0.0
            if lam > 0 and 0 < w < 1 / lam:
                return datatypes.Exponential(lam=lam), w
        elif spec.model_family == 'cipi':
            w = rng.uniform(0.0, L)
            c = rng.uniform(0.0, w)
            p = rng.uniform(0.0, 1.0)
            if w > 0 and c < w and 0 < p < 1:
                return datatypes.CiPi(c=c, p=p), w
        elif spec.model_family == 'uniform':
            alpha = rng.uniform(0.0, L)
            w = rng.uniform(0.0, alpha / 2)
            if 0 < w < alpha / 2:
                return datatypes.Uniform(alpha=alpha), w
        else:
            raise ValueError(f"Unknown model family {spec.model_family!r}")
    logger.warning(f"[SIM] {MAX_REDRAWS} degenerate {spec.model_family} draws in a row (L={L})")
    raise RuntimeError(f"Could not draw a valid {spec.model_family} type with L={L}")


def _draw_bias(
    spec: datatypes.PopulationSpec,
    index: int,
    n: int,
    rng: np.random.Generator,
) -> Tuple[float, float]:
    """(beta, betahat) of the agent with 1-based ``index``."""
    match spec.bias_regime:
        case 'rational':
            return 1.0, 1.0
        case 'naive':
            return rng.uniform(0.0, 1.0), 1.0
        case 'sophisticated':
            beta = rng.uniform(0.0, 1.0)
            return beta, beta
        case 'partially_naive':
            beta = rng.uniform(0.0, 1.0)
            return beta, rng.uniform(beta, 1.0)
        case 'fixed_beta_array':
            beta = index / n
            return beta, (1.0 if spec.array_awareness == 'naive' else beta)
        case 'fixed_naivete_array':
            return 0.5, 1.0 - 0.5 * index / n
    raise ValueError(f"Unknown bias regime {spec.bias_regime!r}")


def sample_economy(
    spec: datatypes.PopulationSpec,
    n: int,
    m: int,
    rng: np.random.Generator,
) -> datatypes.Economy:
    if n < 1:
        raise ValueError(f"An economy needs n >= 1 agents, got {n}")
    agents = []
    for index in range(1, n + 1):
        model, w = _draw_value_model(spec, rng)
        beta, betahat = _draw_bias(spec, index, n, rng)
        agents.append(datatypes.AgentType(model=model, w=w, beta=beta, betahat=betahat))
    return datatypes.Economy(agents=agents, m=m)


class EconomyDataset():
    """Replicate economies of one sweep point, each drawn from its own derived stream."""

    def __init__(
        self,
        spec: datatypes.PopulationSpec,
        n: int,
        m: int,
        seed: int,
        sweep_index: int,
        replicates: int,
    ):
        self.spec = spec
        self.n = n
        self.m = m
        self.seed = seed
        self.sweep_index = sweep_index
        self.replicates = replicates

    def __len__(self):
        return self.replicates

    def stream(self, replicate: int, slot: int) -> np.random.Generator:
        """Slot 0 draws the economy, slot j+1 feeds the j-th mechanism."""
        return derive_rng(self.seed, self.sweep_index, replicate, slot)

    def __getitem__(self, replicate: int) -> datatypes.Economy:
        if not 0 <= replicate < self.replicates:
            raise IndexError(f"Replicate {replicate} out of range [0, {self.replicates})")
        return sample_economy(self.spec, self.n, self.m, self.stream(replicate, 0))
