MODEL_FAMILIES = [
    'cipi', 'exponential', 'uniform'
]

BIAS_REGIMES = [
    'rational', 'naive', 'sophisticated', 'partially_naive',
    'fixed_beta_array', 'fixed_naivete_array'
]

TWO_BID = '2BPB'
M_PLUS_ONE = 'MPlus1'
GCSP = 'GCSP'
FCFS = 'FCFS'
FIRST_BEST_WELFARE = 'FirstBestWelfare'
FIRST_BEST_UTILIZATION = 'FirstBestUtilization'

MECHANISM_IDS = [
    TWO_BID, M_PLUS_ONE, FCFS, FIRST_BEST_WELFARE, FIRST_BEST_UTILIZATION
]

# Sweep defaults: five resources, two to thirty agents.
DEFAULT_RESOURCES = 5
DEFAULT_N_VALUES = list(range(2, 31))
DEFAULT_FCFS_PENALTIES = [5.0, 2.5, 0.0]
DEFAULT_REPLICATES = 10_000

VP_TOLERANCE = 1e-12
BENCHMARK_TOLERANCE = 1e-9
DSE_TOLERANCE = 1e-9

# Replicates per work unit. Must not depend on the worker count.
REPLICATE_CHUNK = 500

THREADS_ENV_VAR = 'PENALTY_LAB_THREADS'
