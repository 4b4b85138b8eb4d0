"""Asymptotic variance of the phase-modulated estimator and its relative efficiency.

The received statistic z_L has mean z̄(θ) = √ρ e^{jωθ} φ(ω) and asymptotic
covariance Σ(θ) = ρ R(ωθ) diag(v_c, v_s) R(ωθ)ᵀ. The minimum-asymptotic-variance
estimator built on it has

    AsV(ω) = v_c v_s / (ω² [v_s φ_I²(ω) + v_c φ_R²(ω)])

and the relative efficiency E(η) = [I(η) · inf_{ω ∈ (0, 2π/θ_R]} AsV(ω)]⁻¹.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.core.cf_analysis import moment_arrays, trig_moments
from app.core.config import DEFAULT_SETTINGS, AnalysisSettings
from app.core.errors import DomainError, NumericFailure, UnsupportedModelError
from app.core.noise_models import NoiseFamily, NoiseModel
from app.core.numerics import lambert_w0, minimize_scalar
from app.schemas import OMEGA_LIMIT0, EfficiencyReport

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# E above 1 by no more than this is rounding in I·inf AsV
_EFFICIENCY_ROUNDING = 1e-12


class EfficiencyMethod(str, Enum):
    AUTO = "auto"
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class MeanVector:
    """E[z_L] split into real and imaginary parts (units of √ρ)."""

    zr_mean: float
    zi_mean: float


@dataclass(frozen=True)
class AsymCovariance:
    """Entries of the symmetric 2x2 asymptotic covariance Σ(θ)."""

    s11: float
    s22: float
    s12: float

    @property
    def determinant(self) -> float:
        return self.s11 * self.s22 - self.s12 * self.s12

    @property
    def trace(self) -> float:
        return self.s11 + self.s22

    def as_array(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])


@dataclass(frozen=True)
class SweepRow:
    """One ω of an AsV sweep; ``None`` marks a pole or a zero that has no dB value."""

    omega: float
    asv: float | None
    asv_db: float | None
    inv_fisher: float | None
    inv_fisher_db: float | None


def to_db(value: float) -> float | None:
    """10·log₁₀(value) for finite positive values, else ``None``."""
    if not math.isfinite(value) or value <= 0:
        return None
    return 10.0 * math.log10(value)


def mean_vector(model: NoiseModel, omega: float, theta: float, rho: float) -> MeanVector:
    """√ρ e^{jωθ} φ(ω) componentwise."""
    phi = model.cf(omega)
    root_rho = math.sqrt(rho)
    c, s = math.cos(omega * theta), math.sin(omega * theta)
    return MeanVector(
        zr_mean=root_rho * (phi.phi_r * c - phi.phi_i * s),
        zi_mean=root_rho * (phi.phi_r * s + phi.phi_i * c),
    )


def sigma_matrix(model: NoiseModel, omega: float, theta: float, rho: float) -> AsymCovariance:
    moments = trig_moments(model, omega)
    c, s = math.cos(omega * theta), math.sin(omega * theta)
    return AsymCovariance(
        s11=rho * (moments.v_c * c * c + moments.v_s * s * s),
        s22=rho * (moments.v_s * c * c + moments.v_c * s * s),
        s12=rho * (moments.v_c - moments.v_s) * s * c,
    )


def fisher_quadratic_form(model: NoiseModel, omega: float, theta: float, rho: float) -> float:
    """[∂z̄/∂θ]ᵀ Σ⁻¹(θ) [∂z̄/∂θ]; its reciprocal is AsV(ω) for every θ."""
    phi = model.cf(omega)
    c, s = math.cos(omega * theta), math.sin(omega * theta)
    gradient = math.sqrt(rho) * omega * np.array([-phi.phi_r * s - phi.phi_i * c, phi.phi_r * c - phi.phi_i * s])
    sigma = sigma_matrix(model, omega, theta, rho).as_array()
    return float(gradient @ np.linalg.solve(sigma, gradient))


def asv_array(model: NoiseModel, omega, pole_threshold: float = DEFAULT_SETTINGS.pole_threshold) -> np.ndarray:
    """AsV(ω) for an array of positive frequencies; +inf at poles."""
    omega = np.asarray(omega, dtype=float)
    v_c, v_s = moment_arrays(model, omega)
    phi_r = np.asarray(model.cf_real(omega), dtype=float)
    # built-in families are symmetric, so φ_I = 0 and v_c cancels: AsV = v_s / (ω² φ_R²)
    denominator = omega * omega * phi_r * phi_r
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(denominator < pole_threshold, np.inf, v_s / np.where(denominator < pole_threshold, 1.0, denominator))
    return out


def asv(model: NoiseModel, omega: float, settings: AnalysisSettings = DEFAULT_SETTINGS) -> float:
    """Asymptotic variance of the minimum-asymptotic-variance estimator at ω.

    Raises:
        DomainError: for ω <= 0

    """
    if not omega > 0:
        raise DomainError(f"AsV is defined for omega > 0, got {omega}")
    phi = model.cf(omega)
    if phi.phi_i == 0.0:
        return float(asv_array(model, omega, settings.pole_threshold))
    moments = trig_moments(model, omega)
    denominator = omega * omega * (moments.v_s * phi.phi_i**2 + moments.v_c * phi.phi_r**2)
    if denominator < settings.pole_threshold:
        return math.inf
    return moments.v_c * moments.v_s / denominator


def asv_closed_form(model: NoiseModel, omega: float) -> float:
    """Family-specific AsV expressions (Gaussian, Laplace, Cauchy)."""
    if not omega > 0:
        raise DomainError(f"AsV is defined for omega > 0, got {omega}")
    w2 = omega * omega
    match model.family:
        case NoiseFamily.GAUSSIAN:
            var = model.variance()
            return math.sinh(var * w2) / w2
        case NoiseFamily.LAPLACE:
            var = model.variance()
            return var * (1.0 + var * w2 / 2.0) ** 2 / (1.0 + 2.0 * var * w2)
        case NoiseFamily.CAUCHY:
            return math.expm1(2.0 * model.scale * omega) / (2.0 * w2)
    raise UnsupportedModelError(f"No closed-form AsV for {model.family.value} noise")


def cauchy_critical_constant() -> float:
    """c = 2 + W(-2e⁻²), the root of (u - 2)eᵘ + 2 = 0 on (0, 2)."""
    return 2.0 + lambert_w0(-2.0 * math.exp(-2.0))


def omega_domain(theta_r: float, settings: AnalysisSettings = DEFAULT_SETTINGS) -> tuple[float, float]:
    """Search interval [ω_min, 2π/θ_R] used in place of the open (0, 2π/θ_R]."""
    if not theta_r > 0:
        raise DomainError(f"theta_r must be positive, got {theta_r}")
    hi = TWO_PI / theta_r
    return settings.omega_floor_fraction * hi, hi


def _finite_upper_limit(objective, lo: float, hi: float, halvings: int = 60) -> float | None:
    """Largest hi/2ᵏ above ``lo`` where ``objective`` is finite, or None."""
    for _ in range(halvings):
        if math.isfinite(objective(hi)):
            return hi
        hi *= 0.5
        if hi <= lo:
            return None
    return None


def inf_asv(model: NoiseModel, theta_r: float, settings: AnalysisSettings = DEFAULT_SETTINGS) -> tuple[float | str, float]:
    """Infimum of AsV over (0, 2π/θ_R].

    The interior minimum comes from :func:`minimize_scalar`. When the noise has
    a variance, the ω → 0 limit of AsV (which is that variance) competes as a
    boundary candidate; if it wins, ``omega_star`` is ``OMEGA_LIMIT0``.
    """
    lo, hi = omega_domain(theta_r, settings)

    def objective(w: float) -> float:
        return asv(model, w, settings)

    try:
        omega_star, value = minimize_scalar(objective, lo, hi, tol=settings.golden_tol * hi, grid_points=settings.grid_points)
    except NumericFailure:
        capped = _finite_upper_limit(objective, lo, hi)
        if capped is None:
            raise
        logger.warning(f"inf_asv {model.family.value}: AsV overflows above omega={capped!r}, searching [{lo!r}, {capped!r}] only")
        omega_star, value = minimize_scalar(objective, lo, capped, tol=settings.golden_tol * capped, grid_points=settings.grid_points)
    if model.variance_defined:
        boundary = model.variance()
        # ties (to rounding) go to the limit, which the interior can only approach
        if boundary <= value * (1.0 + 1e-12):
            logger.debug(f"inf_asv {model.family.value}: boundary limit {boundary!r} beats interior {value!r} at {omega_star!r}")
            return OMEGA_LIMIT0, boundary
    return omega_star, value


def inf_asv_closed_form(model: NoiseModel, theta_r: float) -> tuple[float | str, float]:
    """Analytic infimum of AsV over (0, 2π/θ_R] for Gaussian, Laplace and Cauchy noise.

    Laplace AsV falls from σ² to 3σ²/4 at ω = 1/σ and rises after; Cauchy AsV
    falls from +∞ to its minimum at ω = c/(2γ). Both are clipped to the domain.
    Gaussian AsV is non-decreasing, so its infimum is the ω → 0 limit σ².
    """
    _, hi = omega_domain(theta_r)
    match model.family:
        case NoiseFamily.GAUSSIAN:
            return OMEGA_LIMIT0, model.variance()
        case NoiseFamily.LAPLACE:
            omega_star = 1.0 / math.sqrt(model.variance())
            if omega_star <= hi:
                return omega_star, 0.75 * model.variance()
            return hi, asv_closed_form(model, hi)
        case NoiseFamily.CAUCHY:
            c = cauchy_critical_constant()
            omega_star = c / (2.0 * model.scale)
            if omega_star <= hi:
                gamma = model.scale
                return omega_star, 2.0 * gamma * gamma * math.expm1(c) / (c * c)
            return hi, asv_closed_form(model, hi)
    raise UnsupportedModelError(f"No closed-form infimum for {model.family.value} noise")


def relative_efficiency(
    model: NoiseModel,
    theta_r: float,
    method: EfficiencyMethod | str = EfficiencyMethod.AUTO,
    settings: AnalysisSettings = DEFAULT_SETTINGS,
) -> EfficiencyReport:
    """E(η) = [I(η) · inf AsV]⁻¹ with extended arithmetic (I = ∞ gives E = 0).

    ``auto`` uses the closed form when the family has one and the numeric
    search otherwise.
    """
    method = EfficiencyMethod(method)
    use_closed = method is EfficiencyMethod.CLOSED_FORM or (method is EfficiencyMethod.AUTO and model.family is not NoiseFamily.UNIFORM)
    if use_closed:
        omega_star, value = inf_asv_closed_form(model, theta_r)
    else:
        omega_star, value = inf_asv(model, theta_r, settings)

    fisher = model.fisher()
    if math.isinf(fisher):
        efficiency = 0.0
    else:
        efficiency = 1.0 / (fisher * value)
        if efficiency > 1.0 + _EFFICIENCY_ROUNDING:
            raise NumericFailure(
                f"{model.family.value}: I·inf AsV = {fisher * value!r} is below 1, so E = {efficiency!r} breaks the Fisher bound",
                best_estimate=efficiency,
            )
        efficiency = min(efficiency, 1.0)

    report = EfficiencyReport(
        fisher=fisher,
        inf_asv=value,
        omega_star=omega_star,
        efficiency=efficiency,
        efficiency_db=to_db(efficiency),
        method=EfficiencyMethod.CLOSED_FORM.value if use_closed else EfficiencyMethod.NUMERIC.value,
    )
    logger.info(f"relative_efficiency {model.family.value} theta_r={theta_r!r}: E={efficiency:.9f} ({report.method})")
    return report


def asv_sweep(model: NoiseModel, omega_grid, settings: AnalysisSettings = DEFAULT_SETTINGS) -> list[SweepRow]:
    """AsV and 1/I (linear and dB) at each grid frequency; rows keep grid order."""
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise DomainError("omega grid must be non-empty and strictly positive")
    values = asv_array(model, grid, settings.pole_threshold)
    inv_fisher = 1.0 / model.fisher()
    rows = []
    for omega, value in zip(grid.tolist(), values.tolist(), strict=True):
        rows.append(
            SweepRow(
                omega=omega,
                asv=value if math.isfinite(value) else None,
                asv_db=to_db(value),
                inv_fisher=inv_fisher,
                inv_fisher_db=to_db(inv_fisher),
            )
        )
    return rows
