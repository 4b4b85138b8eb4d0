"""Pydantic schemas for the analysis reports, simulation configs and tool results."""

import math
from enum import Enum
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.noise_models import NoiseModel, parse_model_spec

# omega_star marker for an infimum reached only in the limit ω → 0
OMEGA_LIMIT0 = "limit0"

U64_MAX = (1 << 64) - 1

# slack on ω·θ_R ≤ 2π so that ω = 2π/θ_R computed in floating point is accepted
_DOMAIN_SLACK = 1e-12


def _coerce_model(value: Any) -> Any:
    """Accept ``family:key=value`` text wherever a NoiseModel is expected."""
    if isinstance(value, str):
        return parse_model_spec(value)
    return value


class EstimatorKind(str, Enum):
    ANGLE = "angle"
    GLS = "gls"


class ToolResult(BaseModel):
    """Result from a single tool run."""

    tool_name: str
    success: bool
    data: dict[str, Any] = Field(default_factory=dict)
    errors: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    execution_time: float = 0.0
    exit_code: int = 0


class ToolInfo(BaseModel):
    """Information about an available tool."""

    name: str
    description: str
    version: str = "1.0.0"
    enabled: bool = True


class EfficiencyReport(BaseModel):
    """Fisher information, AsV infimum and the relative efficiency they imply."""

    model_config = ConfigDict(frozen=True)

    fisher: float = Field(gt=0)
    inf_asv: float = Field(gt=0)
    omega_star: float | Literal["limit0"]
    efficiency: float = Field(ge=0.0, le=1.0)
    efficiency_db: float | None = None
    method: Literal["closed_form", "numeric"]


class SimConfig(BaseModel):
    """One network experiment: L sensors observing θ through ``model`` noise."""

    model_config = ConfigDict(frozen=True)

    model: NoiseModel
    sensors: int = Field(ge=1, description="Number of sensors L")
    rho: float = Field(gt=0, allow_inf_nan=False, description="Per-sensor transmit power")
    sigma_nu2: float = Field(default=0.0, ge=0, allow_inf_nan=False, description="Channel noise variance")
    omega: float = Field(gt=0, allow_inf_nan=False)
    theta: float = Field(allow_inf_nan=False)
    theta_r: float = Field(gt=0, allow_inf_nan=False)
    trials: int = Field(ge=2)
    seed: int = Field(default=0, ge=0, le=U64_MAX)
    estimator: EstimatorKind = EstimatorKind.ANGLE

    @field_validator("model", mode="before")
    @classmethod
    def parse_model(cls, value: Any) -> Any:
        return _coerce_model(value)

    @model_validator(mode="after")
    def check_domain(self) -> "SimConfig":
        if self.omega * self.theta_r > 2.0 * math.pi * (1.0 + _DOMAIN_SLACK):
            raise ValueError(f"omega * theta_r must not exceed 2*pi (omega={self.omega}, theta_r={self.theta_r})")
        if not 0.0 <= self.theta <= self.theta_r:
            raise ValueError(f"theta must lie in [0, theta_r], got theta={self.theta}, theta_r={self.theta_r}")
        return self

    @property
    def phase_period(self) -> float:
        return 2.0 * math.pi / self.omega


class CampaignSummary(BaseModel):
    """Monte Carlo statistics of θ̂ over a campaign, next to the analytic AsV."""

    mean_theta_hat: float
    bias: float
    variance: float = Field(ge=0)
    l_times_variance: float
    predicted_asv: float
    trials_used: int


class GridRequest(BaseModel):
    """A noise model and an ascending ω grid of ``points`` values on [omega_min, omega_max]."""

    model: NoiseModel
    omega_min: float = Field(gt=0, allow_inf_nan=False)
    omega_max: float = Field(gt=0, allow_inf_nan=False)
    points: int = Field(ge=1)

    @field_validator("model", mode="before")
    @classmethod
    def parse_model(cls, value: Any) -> Any:
        return _coerce_model(value)

    @model_validator(mode="after")
    def check_grid(self) -> "GridRequest":
        if self.omega_max < self.omega_min:
            raise ValueError(f"omega_max ({self.omega_max}) must not be below omega_min ({self.omega_min})")
        if self.points == 1 and self.omega_max != self.omega_min:
            raise ValueError("a one-point grid needs omega_min == omega_max")
        return self

    def grid(self) -> list[float]:
        if self.points == 1:
            return [self.omega_min]
        return np.linspace(self.omega_min, self.omega_max, self.points).tolist()


class SweepRequest(GridRequest):
    theta_r: float | None = Field(default=None, gt=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def check_range(self) -> "SweepRequest":
        if self.theta_r is not None and self.omega_max * self.theta_r > 2.0 * math.pi * (1.0 + _DOMAIN_SLACK):
            raise ValueError(f"omega_max must not exceed 2*pi/theta_r = {2.0 * math.pi / self.theta_r}")
        return self


class VerifyRequest(GridRequest):
    pass


class EfficiencyRequest(BaseModel):
    model: NoiseModel
    theta_r: float = Field(gt=0, allow_inf_nan=False)
    method: Literal["auto", "closed_form", "numeric"] = "auto"

    @field_validator("model", mode="before")
    @classmethod
    def parse_model(cls, value: Any) -> Any:
        return _coerce_model(value)


class TableRequest(BaseModel):
    """Efficiency of every built-in family at the given native scales."""

    theta_r: float = Field(gt=0, allow_inf_nan=False)
    sigma: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    b: float = Field(default=math.sqrt(0.5), gt=0, allow_inf_nan=False)
    gamma: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    a: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    method: Literal["auto", "closed_form", "numeric"] = "auto"

    def models(self) -> list[NoiseModel]:
        return [NoiseModel.gaussian(self.sigma), NoiseModel.laplace(self.b), NoiseModel.cauchy(self.gamma), NoiseModel.uniform(self.a)]
