from .populations import EconomyDataset, sample_economy
from .experiment import (
    SimulationInvariantError,
    equity_summary,
    row_keys,
    run_chunk,
    run_experiment,
    run_replicate,
)
