import logging
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .. import datatypes
from ..config import resolve_workers
from ..constants import (
    BENCHMARK_TOLERANCE,
    FIRST_BEST_UTILIZATION,
    FIRST_BEST_WELFARE,
    REPLICATE_CHUNK,
    VP_TOLERANCE,
)
from ..mechanisms import BaseMechanism, build_mechanisms
from ..metrics import MetricAccumulator, evaluate, first_best
from ..utils import chunk_bounds
from .populations import EconomyDataset


logger = logging.getLogger(__name__)

RowKey = Tuple[str, Optional[float]]

BENCHMARK_OBJECTIVES = OrderedDict([
    (FIRST_BEST_WELFARE, 'welfare'),
    (FIRST_BEST_UTILIZATION, 'utilization'),
])


class SimulationInvariantError(AssertionError):
    pass


def row_keys(cfg: datatypes.ExperimentConfig) -> List[RowKey]:
    """(mechanism, penalty) of every output row of one sweep point, in output order."""
    keys = []
    for mechanism_id in cfg.mechanisms:
        if mechanism_id == 'FCFS':
            keys.extend((mechanism_id, float(z)) for z in cfg.fcfs_penalties)
        else:
            keys.append((mechanism_id, None))
    return list(OrderedDict.fromkeys(keys))


def _check_outcome(
    metrics: datatypes.OutcomeMetrics,
    bounds: Dict[str, datatypes.FirstBestResult],
    where: str,
) -> None:
    for i, agent in enumerate(metrics.per_agent):
        if agent.allocated and agent.subjective_utility < -VP_TOLERANCE:
            raise SimulationInvariantError(
                f"{where}: agent {i} has subjective utility {agent.subjective_utility:.3g} < 0"
            )
    if metrics.revenue < -VP_TOLERANCE:
        raise SimulationInvariantError(f"{where}: revenue {metrics.revenue:.3g} < 0")
    if metrics.utilization < -VP_TOLERANCE:
        raise SimulationInvariantError(f"{where}: utilization {metrics.utilization:.3g} < 0")
    welfare_bound = bounds['welfare'].welfare
    if metrics.welfare > welfare_bound + BENCHMARK_TOLERANCE * (1 + abs(welfare_bound)):
        raise SimulationInvariantError(
            f"{where}: welfare {metrics.welfare:.12g} exceeds first best {welfare_bound:.12g}"
        )
    usage_bound = bounds['utilization'].utilization
    if metrics.utilization > usage_bound + BENCHMARK_TOLERANCE * (1 + usage_bound):
        raise SimulationInvariantError(
            f"{where}: utilization {metrics.utilization:.12g} exceeds first best {usage_bound:.12g}"
        )


def _benchmark_row(result: datatypes.FirstBestResult) -> Tuple[float, float, float, List[float], List[float]]:
    welfare = [x.welfare if x.selected else 0.0 for x in result.per_agent]
    usage = [x.usage if x.selected else 0.0 for x in result.per_agent]
    return result.welfare, result.utilization, 0.0, welfare, usage


class ChunkResult():
    """Accumulated replicates of one chunk of one sweep point."""

    def __init__(self, keys: Sequence[RowKey], n: int, per_agent: bool):
        width = n if per_agent else None
        self.accumulators: Dict[RowKey, MetricAccumulator] = OrderedDict(
            (key, MetricAccumulator(width)) for key in keys
        )
        self.beta_sums = np.zeros(n)
        self.betahat_sums = np.zeros(n)

    def merge(self, other: 'ChunkResult'):
        for key, accumulator in self.accumulators.items():
            accumulator.merge(other.accumulators[key])
        self.beta_sums += other.beta_sums
        self.betahat_sums += other.betahat_sums


def run_replicate(
    dataset: EconomyDataset,
    replicate: int,
    mechanisms: Sequence[BaseMechanism],
    cfg: datatypes.ExperimentConfig,
    into: ChunkResult,
) -> None:
    """Run every mechanism and benchmark on one shared economy and record the metrics."""
    e = dataset[replicate]
    into.beta_sums += [a.beta for a in e.agents]
    into.betahat_sums += [a.betahat for a in e.agents]

    wanted = [mid for mid in BENCHMARK_OBJECTIVES if mid in cfg.mechanisms]
    bounds: Dict[str, datatypes.FirstBestResult] = {}
    if wanted or cfg.check_invariants:
        for slot, (mechanism_id, objective) in enumerate(BENCHMARK_OBJECTIVES.items()):
            stream = dataset.stream(replicate, len(mechanisms) + 1 + slot)
            bounds[objective] = first_best(
                e, objective, rng=stream, allow_transfers=cfg.fb_cipi_allow_transfers
            )
    for mechanism_id in wanted:
        into.accumulators[(mechanism_id, None)].add(
            *_benchmark_row(bounds[BENCHMARK_OBJECTIVES[mechanism_id]])
        )

    for j, mechanism in enumerate(mechanisms):
        outcome = mechanism.run(e, dataset.stream(replicate, j + 1))
        metrics = evaluate(e, outcome)
        if cfg.check_invariants:
            _check_outcome(
                metrics, bounds,
                where=f"n={dataset.n} replicate={replicate} mechanism={mechanism!r}",
            )
        into.accumulators[(mechanism.name, mechanism.penalty)].add(
            metrics.welfare,
            metrics.utilization,
            metrics.revenue,
            [x.welfare for x in metrics.per_agent],
            [x.usage for x in metrics.per_agent],
        )


def run_chunk(
    cfg: datatypes.ExperimentConfig,
    sweep_index: int,
    start: int,
    stop: int,
) -> ChunkResult:
    n = cfg.n_values[sweep_index]
    dataset = EconomyDataset(cfg.population, n, cfg.m, cfg.seed, sweep_index, cfg.replicates)
    mechanisms = build_mechanisms(cfg.mechanisms, cfg.fcfs_penalties)
    result = ChunkResult(row_keys(cfg), n, cfg.per_agent_stats)
    for replicate in range(start, stop):
        run_replicate(dataset, replicate, mechanisms, cfg, result)
    return result


def _summarise(
    cfg: datatypes.ExperimentConfig,
    n: int,
    total: ChunkResult,
) -> List[datatypes.ResultRow]:
    rows = []
    replicates = cfg.replicates
    for (mechanism_id, penalty), accumulator in total.accumulators.items():
        summary = accumulator.calculate()
        per_agent = None
        if cfg.per_agent_stats:
            per_agent = [
                datatypes.PerAgentStat(
                    agent_index=i + 1,
                    beta=float(total.beta_sums[i] / replicates),
                    betahat=float(total.betahat_sums[i] / replicates),
                    welfare_mean=summary['per_agent_welfare'][i],
                    usage_mean=summary['per_agent_usage'][i],
                )
                for i in range(n)
            ]
        rows.append(datatypes.ResultRow(
            n=n,
            mechanism=mechanism_id,
            penalty=penalty,
            replicates=summary['replicates'],
            welfare_mean=summary['welfare_mean'],
            welfare_se=summary['welfare_se'],
            utilization_mean=summary['utilization_mean'],
            utilization_se=summary['utilization_se'],
            revenue_mean=summary['revenue_mean'],
            revenue_se=summary['revenue_se'],
            per_agent=per_agent,
        ))
    return rows


def run_experiment(
    cfg: datatypes.ExperimentConfig,
    workers: Optional[int] = None,
    progress: bool = False,
) -> List[datatypes.ResultRow]:
    """Sweep every n of ``cfg`` and return one row per (n, mechanism) in config order.

    Replicates are processed in fixed chunks and reduced in chunk order, so
    the rows depend on the seed only, never on the worker count.
    """
    workers = resolve_workers(workers if workers is not None else cfg.workers)
    units = [
        (k, bounds.start, bounds.stop)
        for k in range(len(cfg.n_values))
        for bounds in chunk_bounds(cfg.replicates, REPLICATE_CHUNK)
    ]
    logger.info(
        f"[SIM] {cfg.population.model_family}/{cfg.population.bias_regime} m={cfg.m} "
        f"n={cfg.n_values} replicates={cfg.replicates} units={len(units)} workers={workers}"
    )

    results: Dict[Tuple[int, int], ChunkResult] = {}
    if workers == 1 or len(units) == 1:
        for k, start, stop in tqdm(units, desc='[SIM] chunks', disable=not progress):
            results[(k, start)] = run_chunk(cfg, k, start, stop)
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(units))) as pool:
            futures = {
                pool.submit(run_chunk, cfg, k, start, stop): (k, start)
                for k, start, stop in units
            }
            for future in tqdm(as_completed(futures), total=len(futures),
                               desc='[SIM] chunks', disable=not progress):
                results[futures[future]] = future.result()

    rows = []
    for k, n in enumerate(cfg.n_values):
        starts = sorted(start for kk, start in results if kk == k)
        total = results[(k, starts[0])]
        for start in starts[1:]:
            total.merge(results[(k, start)])
        rows.extend(_summarise(cfg, n, total))
        logger.info(f"[SIM] n={n} done")
    return rows


def equity_summary(rows: Sequence[datatypes.ResultRow]) -> List[datatypes.EquitySummary]:
    """Per-index means and their max-minus-min spread for every row carrying per-agent stats."""
    summaries = []
    for row in rows:
        if row.per_agent is None:
            continue
        welfare = [x.welfare_mean for x in row.per_agent]
        usage = [x.usage_mean for x in row.per_agent]
        summaries.append(datatypes.EquitySummary(
            n=row.n,
            mechanism=row.label,
            spread=max(welfare) - min(welfare),
            usage_spread=max(usage) - min(usage),
            by_index=row.per_agent,
        ))
    if not summaries:
        raise ValueError("No per-agent statistics in the rows; enable per_agent_stats")
    return summaries
