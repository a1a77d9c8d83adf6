"""
Pydantic models for reports, certificates and experiment configuration
"""

from enum import Enum
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, field_validator, model_validator


def encode_matrix(a: np.ndarray) -> list[list[list[float]]]:
    """Complex matrix as nested [re, im] pairs, row-major"""
    m = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


NumericMatrix = Annotated[np.ndarray, PlainSerializer(encode_matrix, return_type=list)]


# Kernel results


class HermEig(BaseModel):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """U diag(eigenvalues) U^dagger"""
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


class PsdResult(BaseModel):
    """Outcome of a positivity test"""

    is_psd: bool
    min_eigenvalue: float


# Optimization


class OptimizationStrategy(str, Enum):
    """Q1 maximization strategies"""

    AUTO = "auto"
    DIAGONAL_GRID = "diagonal_grid"
    MULTISTART = "multistart"


class OptimizationReport(BaseModel):
    """Best coherent information found and where"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: float
    argmax: NumericMatrix
    strategy: OptimizationStrategy
    restarts: int = Field(ge=0)
    converged: bool
    restart_values: list[float] = Field(default_factory=list)
    warning: str | None = None


class PrivateInfoOptimum(BaseModel):
    """Best two-state ensemble found for the private information"""

    p: float
    u: float
    value: float


# Degradability


class Verdict(str, Enum):
    """Degradability classification"""

    DEGRADABLE = "degradable"
    ANTI_DEGRADABLE = "anti_degradable"
    BOTH = "both"
    NEITHER = "neither"
    INDETERMINATE = "indeterminate"


def verdict_from_flags(degradable: bool | None, anti_degradable: bool | None) -> Verdict:
    """Combine the two directions; True certified, False refuted, None undecided"""
    if degradable and anti_degradable:
        return Verdict.BOTH
    if degradable:
        return Verdict.DEGRADABLE
    if anti_degradable:
        return Verdict.ANTI_DEGRADABLE
    if degradable is False and anti_degradable is False:
        return Verdict.NEITHER
    return Verdict.INDETERMINATE


class SideCertificate(BaseModel):
    """One direction of a degradability test"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    certified: bool | None
    method: str
    map: Any = Field(default=None, exclude=True)
    residual: float | None = None
    min_eigenvalue: float | None = None
    witness: str | None = None


class Certificate(BaseModel):
    """Degradability certificate of a channel"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    degradable: SideCertificate
    anti_degradable: SideCertificate

    @property
    def verdict(self) -> Verdict:
        return verdict_from_flags(self.degradable.certified, self.anti_degradable.certified)

    @property
    def map(self) -> Any:
        """Degrading map if certified, else the anti-degrading map if certified"""
        if self.degradable.certified:
            return self.degradable.map
        if self.anti_degradable.certified:
            return self.anti_degradable.map
        return None

    @property
    def residual(self) -> float | None:
        residuals = [
            side.residual
            for side in (self.degradable, self.anti_degradable)
            if side.certified and side.residual is not None
        ]
        return max(residuals) if residuals else None

    @property
    def witness(self) -> str | None:
        notes = [
            side.witness for side in (self.degradable, self.anti_degradable) if side.witness
        ]
        return "; ".join(notes) if notes else None

    def summary(self) -> dict[str, Any]:
        """JSON-ready view including the combined verdict"""
        return {
            "verdict": self.verdict.value,
            "residual": self.residual,
            "witness": self.witness,
            "degradable": self.degradable.model_dump(),
            "anti_degradable": self.anti_degradable.model_dump(),
        }


class RegionVerdict(BaseModel):
    """Analytic degradability region of a flagged amplitude-damping mixture"""

    degradable: bool
    anti_degradable: bool
    boundary: bool = False

    @property
    def verdict(self) -> Verdict:
        return verdict_from_flags(self.degradable, self.anti_degradable)


class SimulationReport(BaseModel):
    """Simulation identity and weak domination check"""

    simulation_residual: float
    simulates: bool
    q1_channel: float
    q1_simulator: float
    weakly_dominated: bool

    @property
    def passed(self) -> bool:
        return self.simulates and self.weakly_dominated


class FixedPointReport(BaseModel):
    """Uniqueness of the fixed state of a channel"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    unique: bool
    span_certified: bool
    span_dimension: int
    multiplicity: int
    product_length: int
    fixed_state: NumericMatrix | None = None


# Log-singularity and scaling


class RateEstimate(BaseModel):
    """Fitted epsilon-log-singularity rate"""

    rate: float
    linear_coefficient: float
    residual: float
    epsilon_grid: list[float]
    dropped_largest: bool = False
    lipschitz_constant: float
    lipschitz_ok: bool


class AmplificationReport(BaseModel):
    """Coherent information gain of a Platypus channel paired with erasure"""

    s: float
    t: float
    lam: float
    case: Literal["I", "II"]
    u_star: float
    q1_channel: float
    q1_erasure: float
    lambda_bound: float
    inside_region: bool
    epsilon_grid: list[float]
    gains: list[float]
    max_gain: float
    rate_b_estimate: float
    rate_e_estimate: float
    rate_b_analytic: float
    rate_e_analytic: float
    rate_gap_positive: bool
    passed: bool


class SmithYardReport(BaseModel):
    """Coherent information of the Smith-Yard state against half the private information"""

    d_c: int
    erasure_dim: int
    probabilities: list[float]
    coherent_information: float
    private_information: float
    half_private: float
    residual: float
    q1_channel: float | None = None
    passed: bool


class ScalingReport(BaseModel):
    """Second-order behaviour of I(V;B) near a product input"""

    gamma: float
    epsilon_grid: list[float]
    mutual_information: list[float]
    fitted_coefficient: float
    analytic_coefficient: float
    relative_error: float
    eigenvalue_residual: float
    passed: bool


# Ratios


class RatioReport(BaseModel):
    """Sampled estimate of an infimum of mutual-information ratios"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    estimate: float
    samples_used: int
    excluded: int
    refined: bool
    argmin: NumericMatrix | None = Field(default=None, exclude=True)
    conjectured: float | None = None
    label: str = "upper bound on the infimum"


class ContractionReport(BaseModel):
    """Sampled range of I(V;B1)/I(V;B2)"""

    sup: float
    inf: float
    samples_used: int
    cq_only: bool = False


class RatioProbeReport(BaseModel):
    """Ratio estimates for a pair of amplitude-damping channels"""

    gamma1: float
    gamma2: float
    r3: RatioReport
    contraction: ContractionReport
    contraction_cq: ContractionReport
    less_noisy_threshold: float
    conjectured_ratio: float
    observed_vs_conjectured: float
    contraction_inf_vs_conjectured: float


# Experiment runner


class ExperimentName(str, Enum):
    """CLI experiments"""

    COHERENT_INFO_SURFACE = "coherent-info-surface"
    PRIVATE_INFO_SURFACE = "private-info-surface"
    FLAGGED_REGION_SCAN = "flagged-region-scan"
    AMPLIFICATION_DEMO = "amplification-demo"
    SMITH_YARD_DEMO = "smith-yard-demo"
    SCALING_DEMO = "scaling-demo"
    RATIO_PROBE = "ratio-probe"
    CERTIFY = "certify"
    Q1 = "q1"


class ExperimentConfig(BaseModel):
    """Fully resolved configuration of one experiment run"""

    experiment: ExperimentName
    family: str | None = None
    channel_file: str | None = None
    params: dict[str, float | int | str] = Field(default_factory=dict)
    epsilon_grid: list[float] | None = None
    out: str
    seed: int = Field(ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1)

    @field_validator("params")
    @classmethod
    def sort_params(cls, v: dict[str, float | int | str]) -> dict[str, float | int | str]:
        return dict(sorted(v.items()))


class ChannelFile(BaseModel):
    """On-disk channel description"""

    kind: Literal["isometry", "kraus"]
    dims: list[int] = Field(min_length=3, max_length=3)
    entries: list[tuple[float, float]]

    @field_validator("dims")
    @classmethod
    def positive_dims(cls, v: list[int]) -> list[int]:
        if any(d <= 0 for d in v):
            raise ValueError("dims must be positive")
        return v

    @model_validator(mode="after")
    def check_entry_count(self) -> "ChannelFile":
        d_in, d_out, d_env = self.dims
        expected = d_out * d_env * d_in
        if len(self.entries) != expected:
            raise ValueError(
                f"expected {expected} entries for dims {self.dims}, got {len(self.entries)}"
            )
        return self
