import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from besselpairs.core.potentials import Potential, is_identically_zero, require_radius
from besselpairs.models.enums import CriterionClass, Suite
from besselpairs.utils.exceptions import InfiniteWeightError, ParamError


# -----------------------------
# Pair Schemas
# -----------------------------
class BesselPairSpec(BaseModel):
    """(V, W) in dimension n on (0, R] with coupling c."""
    model_config = ConfigDict(frozen=True)

    V: Potential
    W: Potential
    n: int
    R: float
    c: float = 1.0

    @model_validator(mode="after")
    def _check(self):
        if self.n < 1:
            raise ParamError("dimension n must be >= 1", "n", self.n)
        if not (math.isfinite(self.R) and self.R > 0):
            raise ParamError("radius R must be finite and > 0", "R", self.R)
        if not (math.isfinite(self.c) and self.c >= 0):
            raise ParamError("coupling c must be finite and >= 0", "c", self.c)
        if is_identically_zero(self.V):
            raise ParamError("V must be positive on (0, R)", "V", None)
        require_radius(self.V, self.R)
        require_radius(self.W, self.R)
        return self

    def with_coupling(self, c: float) -> "BesselPairSpec":
        return BesselPairSpec(V=self.V, W=self.W, n=self.n, R=self.R, c=c)


# -----------------------------
# Shooting Schemas
# -----------------------------
class StepStats(BaseModel):
    nfev: int = 0
    steps: int = 0
    status: int = 0
    message: str = ""


class ShootingReport(BaseModel):
    zero_count: int
    first_zero: Optional[float] = None
    theta_final: float
    positive_on_interval: bool
    epsilon_used: float
    step_stats: StepStats = Field(default_factory=StepStats)
    boundary_zero: bool = False  # theta(R) a multiple of pi within tol
    oscillatory_at_origin: bool = False
    origin_index: Optional[float] = None  # limit of the criterion below eps, may be inf
    degenerate: bool = False


class HypothesisReport(BaseModel):
    flux_diverges: bool
    mass_finite: bool
    flux_pieces: List[float] = Field(default_factory=list)
    mass_pieces: List[float] = Field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.flux_diverges and self.mass_finite


# -----------------------------
# Weight Schemas
# -----------------------------
class WeightEstimate(BaseModel):
    lower: float
    upper: float
    value: float
    iterations: int = 0
    reports: List[ShootingReport] = Field(default_factory=list)
    infinite: bool = False
    cap: float

    def require_finite(self) -> "WeightEstimate":
        if self.infinite:
            raise InfiniteWeightError(
                f"no zero appeared for couplings up to {self.cap:g}", cap=self.cap
            )
        return self


class CriterionReport(BaseModel):
    limit_estimate: float
    classification: CriterionClass
    samples: List[Tuple[float, float]] = Field(default_factory=list)
    margin: float


class IntegralConditionReport(BaseModel):
    samples: List[Tuple[float, float]] = Field(default_factory=list)
    bounded: bool
    minimum: float


# -----------------------------
# Constant Schemas
# -----------------------------
class Component(BaseModel):
    label: str
    value: float


class ConstantResult(BaseModel):
    value: float
    case_taken: str
    k_min: Optional[int] = None
    components: List[Component] = Field(default_factory=list)
    table_value: Optional[float] = None
    table_case: Optional[str] = None
    table_agrees: Optional[bool] = None
    modes_scanned: Optional[int] = None


# -----------------------------
# Oracle Schemas
# -----------------------------
class ModeScanResult(BaseModel):
    value: float
    k_min: int
    mode_values: List[float] = Field(default_factory=list)
    closed_form_k_min: Optional[int] = None
    matches_closed_form: bool


class StudyRow(BaseModel):
    N: int
    value: float
    extrapolated: Optional[float] = None


class ConvergenceStudy(BaseModel):
    problem: str
    rows: List[StudyRow] = Field(default_factory=list)
    limit: float
    observed_order: float


# -----------------------------
# Verification Schemas
# -----------------------------
class CheckItem(BaseModel):
    name: str
    passed: bool
    expected: Optional[float] = None
    observed: Optional[float] = None
    deviation: Optional[float] = None
    tolerance: Optional[float] = None
    detail: Optional[str] = None


class SuiteReport(BaseModel):
    suite: Suite
    items: List[CheckItem] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def max_deviation(self) -> float:
        deviations = [item.deviation for item in self.items if item.deviation is not None]
        return max(deviations, default=0.0)


# -----------------------------
# Table Schemas
# -----------------------------
class TableRow(BaseModel):
    n: int
    m: float
    value: float
    case: str
    k_min: Optional[int] = None
