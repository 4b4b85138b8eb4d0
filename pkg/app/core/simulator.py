"""Sensor network over a Gaussian multiple-access channel, and the fusion-center estimators.

Sensor l observes x_l = θ + η_l and transmits √ρ·e^{jωx_l}. The fusion center
receives the superposition y_L = √ρ Σ e^{jωx_l} + ν and works with z_L = y_L / L.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from app.core.cf_analysis import trig_moments
from app.core.efficiency import mean_vector, sigma_matrix
from app.core.errors import DegenerateSignalError, DomainError, SingularCovarianceError
from app.core.noise_models import NoiseModel
from app.core.numerics import golden_section
from app.core.random_streams import RandomStream
from app.schemas import EstimatorKind, SimConfig

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SINGULAR_MOMENT = 1e-12

# relative cost gap under which two θ candidates count as tied
_TIE_TOLERANCE = 1e-12

Complex = tuple[float, float]


@dataclass(frozen=True)
class TrialOutput:
    z_r: float
    z_i: float
    theta_hat: float


def simulate_received(config: SimConfig, stream: RandomStream) -> Complex:
    """Draw one realisation of z_L.

    The stream is consumed in a fixed order: L noise samples, then the real and
    imaginary channel-noise components, each N(0, σ_ν²/2).
    """
    eta = config.model.sample(stream, config.sensors)
    phase = config.omega * (config.theta + eta)
    root_rho = math.sqrt(config.rho)
    y_r = root_rho * float(np.sum(np.cos(phase)))
    y_i = root_rho * float(np.sum(np.sin(phase)))
    if config.sigma_nu2 > 0:
        nu = stream.normal(2, math.sqrt(config.sigma_nu2 / 2.0))
        y_r += float(nu[0])
        y_i += float(nu[1])
    return y_r / config.sensors, y_i / config.sensors


def _reduce(theta: float, period: float) -> float:
    reduced = math.fmod(theta, period)
    if reduced < 0:
        reduced += period
    # fmod of a value just below a multiple can round up to the period itself
    return 0.0 if reduced >= period else reduced


def circular_distance(a: float, b: float, period: float) -> float:
    d = _reduce(a - b, period)
    return min(d, period - d)


def angle_estimate(z: Complex, omega: float, theta_r: float) -> float:
    """θ̂ = (1/ω)∠z_L with the angle lifted to [0, 2π), reduced into [0, 2π/ω).

    Raises:
        DegenerateSignalError: for z = 0
        DomainError: for ω <= 0 or ω·θ_R > 2π

    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if omega * theta_r > TWO_PI * (1.0 + 1e-12):
        raise DomainError(f"omega * theta_r must not exceed 2*pi (omega={omega}, theta_r={theta_r})")
    z_r, z_i = z
    if z_r == 0.0 and z_i == 0.0:
        raise DegenerateSignalError("z_L = 0 has no phase; the angle estimate is undefined")
    angle = math.atan2(z_i, z_r)
    if angle < 0:
        angle += TWO_PI
    return _reduce(angle / omega, TWO_PI / omega)


def _checked_moments(model: NoiseModel, omega: float):
    moments = trig_moments(model, omega)
    if moments.v_c < SINGULAR_MOMENT:
        raise SingularCovarianceError("v_c", moments.v_c)
    if moments.v_s < SINGULAR_MOMENT:
        raise SingularCovarianceError("v_s", moments.v_s)
    return moments


def gls_cost(model: NoiseModel, z: Complex, omega: float, theta: float, rho: float) -> float:
    """[z - z̄(θ)]ᵀ Σ⁻¹(θ) [z - z̄(θ)].

    Raises:
        SingularCovarianceError: when v_c or v_s is below 1e-12

    """
    _checked_moments(model, omega)
    mean = mean_vector(model, omega, theta, rho)
    residual = np.array([z[0] - mean.zr_mean, z[1] - mean.zi_mean])
    sigma = sigma_matrix(model, omega, theta, rho).as_array()
    return max(float(residual @ np.linalg.solve(sigma, residual)), 0.0)


def gls_cost_expanded(model: NoiseModel, z: Complex, omega: float, theta, rho: float):
    """The same cost expanded in cos/sin of ωθ and 2ωθ (symmetric noise only); vectorised over θ."""
    moments = _checked_moments(model, omega)
    v_c, v_s = moments.v_c, moments.v_s
    phi = model.cf(omega).phi_r
    z_r, z_i = z
    alpha = omega * np.asarray(theta, dtype=float)
    numerator = (
        rho * (v_c + v_s) * (z_r * z_r + z_i * z_i)
        + rho * (v_c - v_s) * (z_i * z_i - z_r * z_r) * np.cos(2.0 * alpha)
        - 2.0 * rho * (v_c - v_s) * z_r * z_i * np.sin(2.0 * alpha)
        - 4.0 * rho**1.5 * v_s * phi * (z_i * np.sin(alpha) + z_r * np.cos(alpha))
        + 2.0 * rho * rho * v_s * phi * phi
    )
    cost = np.maximum(numerator / (2.0 * rho * rho * v_c * v_s), 0.0)
    return float(cost) if np.ndim(cost) == 0 else cost


def stationary_candidates(model: NoiseModel, z: Complex, omega: float, theta_r: float, rho: float) -> list[float]:
    """Stationary points of the symmetric-noise cost that fall in [0, θ_R], plus both ends.

    With δ = ωθ - ∠z the cost varies as -A·cos 2δ - B·cos δ (A = ρ(v_c - v_s)|z|²,
    B = 4ρ^{3/2} v_s φ_R |z|), so ∂/∂δ = sin δ·(4A cos δ + B) vanishes at δ ∈ {0, π}
    and, when |B/4A| ≤ 1, at cos δ = -B/(4A).
    """
    moments = _checked_moments(model, omega)
    z_r, z_i = z
    modulus = math.hypot(z_r, z_i)
    if modulus == 0.0:
        raise DegenerateSignalError("z_L = 0 has no phase; every θ is stationary")
    psi = math.atan2(z_i, z_r)
    a = rho * (moments.v_c - moments.v_s) * modulus * modulus
    b = 4.0 * rho**1.5 * moments.v_s * model.cf(omega).phi_r * modulus

    offsets = [0.0, math.pi]
    if a != 0.0 and abs(b / (4.0 * a)) <= 1.0:
        delta = math.acos(-b / (4.0 * a))
        offsets += [delta, -delta]

    period = TWO_PI / omega
    candidates = {0.0, theta_r}
    for offset in offsets:
        theta = _reduce((psi + offset) / omega, period)
        if theta <= theta_r:
            candidates.add(theta)
    return sorted(candidates)


def gls_estimate(model: NoiseModel, z: Complex, omega: float, theta_r: float, rho: float, grid_points: int = 1024) -> float:
    """argmin over θ ∈ [0, θ_R] of :func:`gls_cost`, reduced into [0, 2π/ω).

    A dense scan locates the basin, golden-section search refines it and the
    result competes with the analytic stationary points. Near-ties go to the
    candidate closest (on the circle) to the angle estimate.
    """
    period = TWO_PI / omega
    grid = np.linspace(0.0, theta_r, max(grid_points, 1024))
    costs = gls_cost_expanded(model, z, omega, grid, rho)
    best = int(np.argmin(costs))
    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, grid.size - 1)])

    def cost(theta: float) -> float:
        return gls_cost(model, z, omega, theta, rho)

    refined, _ = golden_section(cost, lo, hi, tol=1e-13 * period)
    pool = [refined, *stationary_candidates(model, z, omega, theta_r, rho)]
    scored = [(cost(theta), theta) for theta in pool]
    best_cost = min(c for c, _ in scored)
    anchor = angle_estimate(z, omega, theta_r)
    tied = [theta for c, theta in scored if c <= best_cost + _TIE_TOLERANCE * (1.0 + best_cost)]
    choice = min(tied, key=lambda theta: circular_distance(theta, anchor, period))
    return _reduce(choice, period)


def run_trial(config: SimConfig, stream: RandomStream, gls_grid_points: int = 1024) -> TrialOutput:
    z = simulate_received(config, stream)
    if config.estimator is EstimatorKind.GLS:
        theta_hat = gls_estimate(config.model, z, config.omega, config.theta_r, config.rho, gls_grid_points)
    else:
        theta_hat = angle_estimate(z, config.omega, config.theta_r)
    return TrialOutput(z_r=z[0], z_i=z[1], theta_hat=theta_hat)
