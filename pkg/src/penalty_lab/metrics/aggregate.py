import typing

import numpy as np


def mean_and_se(values: np.ndarray) -> typing.Tuple[float, float]:
    """Sample mean and its standard error; the error of a single sample is 0."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("Cannot summarise an empty sample")
    mean = float(values.mean())
    if values.size == 1:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / np.sqrt(values.size))


class MetricSummary(typing.TypedDict):
    replicates: int
    welfare_mean: float
    welfare_se: float
    utilization_mean: float
    utilization_se: float
    revenue_mean: float
    revenue_se: float
    per_agent_welfare: typing.Union[typing.List[float], None]
    per_agent_usage: typing.Union[typing.List[float], None]


class MetricAccumulator():
    """Collects per-replicate welfare, utilization and revenue of one (n, mechanism) sweep point.

    Per-agent welfare and usage are kept as running sums by agent index.
    """

    def __init__(self, n_agents: typing.Optional[int] = None):
        self.n_agents = n_agents
        self.reset()

    def add(
        self,
        welfare: float,
        utilization: float,
        revenue: float,
        per_agent_welfare: typing.Optional[typing.Sequence[float]] = None,
        per_agent_usage: typing.Optional[typing.Sequence[float]] = None,
    ):
        self.__welfare.append(welfare)
        self.__utilization.append(utilization)
        self.__revenue.append(revenue)
        if self.n_agents is not None:
            self.__agent_welfare += np.asarray(per_agent_welfare, dtype=float)
            self.__agent_usage += np.asarray(per_agent_usage, dtype=float)

    def merge(self, other: 'MetricAccumulator'):
        """Append another accumulator's replicates after this one's."""
        if other.n_agents != self.n_agents:
            raise ValueError(
                f"Cannot merge accumulators over {other.n_agents} and {self.n_agents} agents"
            )
        self.__welfare.extend(other.__welfare)
        self.__utilization.extend(other.__utilization)
        self.__revenue.extend(other.__revenue)
        if self.n_agents is not None:
            self.__agent_welfare += other.__agent_welfare
            self.__agent_usage += other.__agent_usage

    def reset(self):
        self.__welfare = []
        self.__utilization = []
        self.__revenue = []
        if self.n_agents is not None:
            self.__agent_welfare = np.zeros(self.n_agents)
            self.__agent_usage = np.zeros(self.n_agents)

    def __len__(self) -> int:
        return len(self.__welfare)

    def calculate(self, reset=True) -> MetricSummary:
        replicates = len(self)
        welfare_mean, welfare_se = mean_and_se(self.__welfare)
        utilization_mean, utilization_se = mean_and_se(self.__utilization)
        revenue_mean, revenue_se = mean_and_se(self.__revenue)
        per_agent_welfare = per_agent_usage = None
        if self.n_agents is not None:
            per_agent_welfare = (self.__agent_welfare / replicates).tolist()
            per_agent_usage = (self.__agent_usage / replicates).tolist()

        summary = MetricSummary(
            replicates=replicates,
            welfare_mean=welfare_mean,
            welfare_se=welfare_se,
            utilization_mean=utilization_mean,
            utilization_se=utilization_se,
            revenue_mean=revenue_mean,
            revenue_se=revenue_se,
            per_agent_welfare=per_agent_welfare,
            per_agent_usage=per_agent_usage,
        )
        if reset:
            self.reset()
        return summary
