from pydantic import BaseModel, ConfigDict, Field, model_validator
from datetime import datetime
from typing import Any, Dict, List, Optional

from .models import AdversaryKind, CodeFamily, SearchMode, Subcommand


# Leakage reports
class LeakageReport(BaseModel):
    read_set: List[int]
    uniform_mi: float
    capacity_mi: float
    certificate: Optional[List[int]] = None
    mode: SearchMode = SearchMode.EXHAUSTIVE
    exact: bool = True
    sets_evaluated: int = 1
    dual_distance: Optional[int] = None
    note: str = ""

    @model_validator(mode="after")
    def check_order(self):
        if self.uniform_mi < -1e-9:
            raise ValueError(f"negative leakage {self.uniform_mi}")
        if self.capacity_mi < self.uniform_mi - 1e-6:
            raise ValueError(
                f"capacity {self.capacity_mi} below uniform-input leakage"
                f" {self.uniform_mi}"
            )
        return self


class NormalizationReport(BaseModel):
    rank_g: int
    rank_g_w: int
    mbits: int
    wbits: int
    error_lower_bound: float = 0.5
    reason: str


class KwiseReport(BaseModel):
    family: str
    b: int
    t: int
    k: int
    n: int
    ell: int
    tuples_checked: int
    violations: int


# Soft-covering schemas
class SoftCoverDiagnostics(BaseModel):
    divergence: float = Field(ge=0.0)
    p2_mass: float = Field(ge=0.0, le=1.0)
    delta1_max: float
    epsilon: float
    d1: float
    d2: float
    split_bound: float
    estimate: bool = False

    @property
    def split_bound_holds(self) -> bool:
        return self.divergence <= self.split_bound + 1e-12


class TailParams(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    keybits: int = Field(ge=0)
    k: int = Field(ge=1)
    channel: Any
    threshold: float
    family: CodeFamily = CodeFamily.KWISE
    eps: float = Field(default=0.1, ge=0.0)


class TailExperimentResult(BaseModel):
    family: CodeFamily
    n: int
    keybits: int
    trials: int
    threshold: float
    probability: float
    mean_divergence: float
    stderr: float
    divergences: List[float]
    diagnostics: List[SoftCoverDiagnostics] = []


class ConcentrationCheck(BaseModel):
    mu: float
    tau: float
    trials: int
    empirical_tail: float
    bound: float
    within_bound: bool


class BoundReport(BaseModel):
    value: float
    applicable: bool = True
    k_star: Optional[int] = None
    note: str = ""

    @property
    def clamped(self) -> float:
        return min(self.value, 1.0)


class ProofConstants(BaseModel):
    alpha: float
    eta: float
    pi1: float
    qn: float
    violations: List[str] = []


class SufficientConditionReport(BaseModel):
    p2_condition: bool
    delta1_condition: bool
    divergence_bound: float
    divergence_within_bound: bool

    @property
    def holds(self) -> bool:
        return self.p2_condition and self.delta1_condition


# Reliability schemas
class AdversaryStrategy(BaseModel):
    kind: AdversaryKind
    pn: int = Field(ge=0)
    rn: int = Field(default=0, ge=0)
    seed: int = 0

    def describe(self) -> str:
        return f"{self.kind.value}(pn={self.pn}, rn={self.rn}, seed={self.seed})"


class ReliabilityReport(BaseModel):
    strategy: str
    per_message: List[float]
    max_error: float
    trials: int
    exact: bool

    @model_validator(mode="after")
    def check_estimates(self):
        if any(not 0.0 <= e <= 1.0 for e in self.per_message):
            raise ValueError("error estimates must lie in [0, 1]")
        if self.per_message and self.max_error < max(self.per_message):
            raise ValueError("max_error below a per-message estimate")
        return self


class Theorem2Row(BaseModel):
    sample: int
    k: int
    seed: int
    capacity_mi: float
    uniform_mi: float
    leakage_exact: bool
    strategy: str
    max_error: float
    success: bool


class Theorem2Report(BaseModel):
    rows: List[Theorem2Row]
    success_fraction: Dict[int, float]


# CLI schemas
class ExperimentConfig(BaseModel):
    command: Subcommand
    n: List[int] = [8]
    mbits: int = Field(default=1, ge=0)
    wbits: int = Field(default=1, ge=0)
    k: List[int] = [4]
    rn: int = Field(default=0, ge=0)
    pn: int = Field(default=0, ge=0)
    p: float = 0.0
    r: float = 0.0
    trials: int = Field(default=100, ge=0)
    samples: int = Field(default=1, ge=0)
    seed: int = Field(default=0, ge=0)
    channel: str = "bsc:0.3"
    mode: SearchMode = SearchMode.EXHAUSTIVE
    out: Optional[str] = None
    code: Optional[str] = None
    eps: float = 0.1
    threshold: float = 0.0
    delta: Optional[float] = None
    leak_threshold: Optional[float] = None
    key_rate: Optional[float] = None
    family: Optional[CodeFamily] = None
    strategies: List[AdversaryKind] = [AdversaryKind.NONE]
    grid_points: int = Field(default=101, ge=2)
    workers: Optional[int] = None
    b: Optional[int] = None
    t: Optional[int] = None

    @model_validator(mode="after")
    def check_parameters(self):
        if any(v < 0 for v in self.n + self.k):
            raise ValueError("integer parameters must be >= 0")
        for n in self.n:
            if self.rn > n:
                raise ValueError(f"rn={self.rn} exceeds n={n}")
            if self.pn > n:
                raise ValueError(f"pn={self.pn} exceeds n={n}")
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"p={self.p} outside [0, 1/2]")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r={self.r} outside [0, 1]")
        if (
            self.command == Subcommand.SOFTCOVER_RUN
            and self.family in (None, CodeFamily.KWISE)
            and any(k < 4 or k % 2 for k in self.k)
        ):
            raise ValueError("k-wise soft-covering runs need an even k >= 4")
        return self


class Provenance(BaseModel):
    build_id: str
    seed: int
    settings: Dict[str, Any]


class ResultRecord(BaseModel):
    config: ExperimentConfig
    results: Dict[str, Any]
    provenance: Provenance
    timestamp: datetime
