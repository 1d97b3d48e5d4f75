from .outcome import evaluate, evaluate_agent, welfare_at_penalty
from .first_best import first_best, first_best_agent, first_best_penalty, first_best_value
from .aggregate import MetricAccumulator, MetricSummary, mean_and_se
