from typing import Annotated, Dict, FrozenSet, List, Literal, Optional, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .constants import (
    DEFAULT_FCFS_PENALTIES,
    DEFAULT_N_VALUES,
    DEFAULT_REPLICATES,
    DEFAULT_RESOURCES,
    MECHANISM_IDS,
)


MechanismId = Literal['2BPB', 'MPlus1', 'FCFS', 'FirstBestWelfare', 'FirstBestUtilization']
ModelFamily = Literal['cipi', 'exponential', 'uniform']
BiasRegime = Literal[
    'rational', 'naive', 'sophisticated', 'partially_naive',
    'fixed_beta_array', 'fixed_naivete_array'
]
Objective = Literal['welfare', 'utilization']


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# ---------------------------------------------------------------------------
# Agent types
# ---------------------------------------------------------------------------

class CiPi(_Frozen):
    """Period-1 value is -c with probability p, otherwise the agent cannot show."""
    kind: Literal['cipi'] = 'cipi'
    c: float = Field(
        ge=0,
        description="Opportunity cost of showing up"
    )
    p: float = Field(
        gt=0, lt=1,
        description="Probability the agent is able to show up"
    )


class Exponential(_Frozen):
    """Period-1 value is -Exp(lam)."""
    kind: Literal['exponential'] = 'exponential'
    lam: float = Field(
        gt=0,
        description="Rate of the exponential opportunity cost"
    )


class Uniform(_Frozen):
    """Period-1 value is U[-alpha, 0]."""
    kind: Literal['uniform'] = 'uniform'
    alpha: float = Field(
        gt=0,
        description="Width of the opportunity cost support"
    )


ValueModel = Annotated[
    Union[CiPi, Exponential, Uniform],
    Field(discriminator='kind')
]


class AgentType(_Frozen):
    model: ValueModel = Field(
        description="Distribution of the period-1 immediate value"
    )
    w: float = Field(
        ge=0,
        description="Future value gained from using the resource"
    )
    beta: float = Field(
        ge=0, le=1,
        description="True present-bias factor"
    )
    betahat: float = Field(
        ge=0, le=1,
        description="Present-bias factor the agent believes it has"
    )

    @model_validator(mode='after')
    def _check_assumptions(self) -> 'AgentType':
        if self.betahat < self.beta:
            raise ValueError(
                f"betahat ({self.betahat}) must lie in [beta, 1] (beta={self.beta})"
            )
        model = self.model
        if isinstance(model, CiPi):
            if not self.w > model.c:
                raise ValueError(
                    f"CiPi agent needs w > c for a valuable option (w={self.w}, c={model.c})"
                )
        elif isinstance(model, Exponential):
            if not 0 < self.w < 1 / model.lam:
                raise ValueError(
                    f"Exponential agent needs 0 < w < 1/lam (w={self.w}, 1/lam={1 / model.lam})"
                )
        elif isinstance(model, Uniform):
            if not 0 < self.w < model.alpha / 2:
                raise ValueError(
                    f"Uniform agent needs 0 < w < alpha/2 (w={self.w}, alpha={model.alpha})"
                )
        return self


class Economy(_Frozen):
    agents: List[AgentType] = Field(
        min_length=1,
        description="Agent types, indexed 0..n-1"
    )
    m: int = Field(
        ge=1,
        description="Number of identical resources"
    )

    @property
    def n(self) -> int:
        return len(self.agents)


# ---------------------------------------------------------------------------
# Mechanism outcomes
# ---------------------------------------------------------------------------

class TwoPartPayment(_Frozen):
    base: float = Field(
        default=0.0,
        description="Payment collected in period 1 regardless of use"
    )
    penalty: float = Field(
        default=0.0, ge=0,
        description="Payment collected only on a no-show"
    )


class MechanismOutcome(_Frozen):
    mechanism: str = Field(
        description="Identifier of the mechanism that produced the outcome"
    )
    allocated: FrozenSet[int] = Field(
        default_factory=frozenset,
        description="Indices of agents holding a resource"
    )
    payments: List[TwoPartPayment] = Field(
        default_factory=list,
        description="Per-agent two part payment"
    )
    first_bids: List[float] = Field(
        default_factory=list,
        description="Per-agent first-round bid (empty for FCFS)"
    )
    second_bids: Dict[int, float] = Field(
        default_factory=dict,
        description="Second-round penalty bids of allocated agents (2BPB only)"
    )
    min_penalty: float = Field(
        default=0.0,
        description="Announced (m+1)th first bid (2BPB only)"
    )
    order: List[int] = Field(
        default_factory=list,
        description="Ranking after tie-break, or arrival order for FCFS"
    )

    @model_validator(mode='after')
    def _check_payments(self) -> 'MechanismOutcome':
        for i, payment in enumerate(self.payments):
            if i not in self.allocated and (payment.penalty != 0 or payment.base != 0):
                raise ValueError(f"Agent {i} is not allocated but faces payment {payment}")
        for i, bid in self.second_bids.items():
            if i not in self.allocated:
                raise ValueError(f"Agent {i} placed a second bid without an allocation")
            if bid < self.min_penalty:
                raise ValueError(
                    f"Second bid {bid} of agent {i} is below the minimum penalty {self.min_penalty}"
                )
        return self


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

class AgentMetrics(_Frozen):
    allocated: bool = False
    usage: float = 0.0
    welfare: float = 0.0
    subjective_utility: float = 0.0
    true_utility: float = 0.0
    revenue: float = 0.0


class OutcomeMetrics(_Frozen):
    utilization: float
    welfare: float
    revenue: float
    per_agent: List[AgentMetrics] = Field(default_factory=list)


class FirstBestAgent(_Frozen):
    value: float = Field(description="Per-agent first-best value for the objective")
    penalty: float = Field(description="Penalty attaining the value")
    welfare: float = Field(description="Expected welfare at that penalty")
    usage: float = Field(description="Show probability at that penalty")
    selected: bool = False


class FirstBestResult(_Frozen):
    objective: Objective
    value: float
    welfare: float
    utilization: float
    per_agent: List[FirstBestAgent] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Numeric oracle
# ---------------------------------------------------------------------------

class OracleConfig(_Frozen):
    grid_points: int = Field(
        default=20001, ge=3,
        description="Points of the coarse penalty grid"
    )
    z_max_factor: float = Field(
        default=4.0, gt=0,
        description="Multiplier on bracketing bounds for bid grids and first-best searches"
    )
    quad_abs_tol: float = Field(
        default=1e-9, gt=0,
        description="Absolute tolerance of adaptive quadrature"
    )
    root_tol: float = Field(
        default=1e-10, gt=0,
        description="Bracket width at which zero-crossing bisection stops"
    )
    mc_samples: int = Field(
        default=10**6, ge=1,
        description="Monte Carlo draws per allocated agent"
    )
    n_profiles: int = Field(
        default=32, ge=1,
        description="Random opponent profiles per best-response check"
    )
    max_agents: int = Field(
        default=6, ge=1,
        description="Largest economy accepted by best-response search"
    )
    seed: int = Field(
        default=0, ge=0, lt=2**64,
        description="Seed for every random choice the oracle makes"
    )


class GridSup(_Frozen):
    value: float
    argmax: float


class BestResponseResult(_Frozen):
    mechanism: str
    agent: int
    prescribed_bid: Optional[float] = Field(
        default=None,
        description="Equilibrium bid the mechanism prescribes (None for GCSP)"
    )
    best_bid: float = Field(description="Most profitable deviation, or least-regret bid")
    best_value: float = Field(description="Subjective utility of best_bid in its best profile")
    max_gain: float = Field(description="Largest gain of any bid over the reference bid")
    dominant: bool = Field(description="Reference bid is weakly optimal against every profile")
    profile_best_bids: List[float] = Field(default_factory=list)


class MonteCarloMetrics(_Frozen):
    samples: int
    utilization: float
    utilization_se: float
    welfare: float
    welfare_se: float
    revenue: float
    revenue_se: float


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

class PopulationSpec(_Frozen):
    model_family: ModelFamily = 'exponential'
    L: float = Field(
        default=20.0, gt=0,
        description="Scale of the type distribution"
    )
    bias_regime: BiasRegime = 'naive'
    array_awareness: Literal['naive', 'sophisticated'] = Field(
        default='sophisticated',
        description="betahat rule of the fixed_beta_array regime"
    )


class ExperimentConfig(_Frozen):
    population: PopulationSpec = Field(default_factory=PopulationSpec)
    m: int = Field(default=DEFAULT_RESOURCES, ge=1)
    n_values: List[int] = Field(default_factory=lambda: list(DEFAULT_N_VALUES), min_length=1)
    mechanisms: List[MechanismId] = Field(
        default_factory=lambda: list(MECHANISM_IDS),
        min_length=1
    )
    fcfs_penalties: List[float] = Field(default_factory=lambda: list(DEFAULT_FCFS_PENALTIES))
    replicates: int = Field(default=DEFAULT_REPLICATES, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    per_agent_stats: bool = False
    fb_cipi_allow_transfers: bool = False
    check_invariants: bool = True
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator('n_values')
    @classmethod
    def _positive_sizes(cls, values: List[int]) -> List[int]:
        if any(n < 1 for n in values):
            raise ValueError(f"every agent count must be >= 1, got {values}")
        return values

    @field_validator('fcfs_penalties')
    @classmethod
    def _nonnegative_penalties(cls, values: List[float]) -> List[float]:
        if any(z < 0 for z in values):
            raise ValueError(f"FCFS penalties must be >= 0, got {values}")
        if len(set(values)) != len(values):
            raise ValueError(f"FCFS penalties must be distinct, got {values}")
        return values

    @model_validator(mode='after')
    def _fcfs_needs_penalties(self) -> 'ExperimentConfig':
        if 'FCFS' in self.mechanisms and not self.fcfs_penalties:
            raise ValueError("FCFS requested without any fcfs_penalties")
        return self


class PerAgentStat(_Frozen):
    agent_index: int = Field(description="1-based agent index")
    beta: float
    betahat: float
    welfare_mean: float
    usage_mean: float


class ResultRow(_Frozen):
    n: int
    mechanism: str
    penalty: Optional[float] = None
    replicates: int
    welfare_mean: float
    welfare_se: float = Field(ge=0)
    utilization_mean: float
    utilization_se: float = Field(ge=0)
    revenue_mean: float
    revenue_se: float = Field(ge=0)
    per_agent: Optional[List[PerAgentStat]] = None

    @property
    def label(self) -> str:
        if self.penalty is None:
            return self.mechanism
        return f"{self.mechanism}({self.penalty:g})"


class EquitySummary(_Frozen):
    n: int
    mechanism: str = Field(description="Row label, FCFS carrying its penalty")
    spread: float = Field(description="Max minus min per-index mean welfare")
    usage_spread: float = Field(description="Max minus min per-index mean usage")
    by_index: List[PerAgentStat] = Field(default_factory=list)


class CheckResult(_Frozen):
    name: str
    passed: bool
    detail: str = ""
