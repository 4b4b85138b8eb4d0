"""Trigonometric moments, Stein-identity checks and the Fisher/characteristic-function inequalities.

For a noise η with characteristic function φ = φ_R + jφ_I and Fisher information I:

    ω² φ_I²(ω) ≤ I · v_c(ω)        ω² φ_R²(ω) ≤ I · v_s(ω)

with v_c = var cos(ωη), v_s = var sin(ωη), and equality in both only at ω = 0.
The residuals returned here are the slacks of those two inequalities.
"""

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from app.core.errors import UnsupportedModelError
from app.core.noise_models import NoiseFamily, NoiseModel
from app.core.numerics import QuadratureSpec, integrate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrigMoments:
    """Variances of cos(ωη) and sin(ωη)."""

    v_c: float
    v_s: float


@dataclass(frozen=True)
class Theorem1Residuals:
    """Slack of the imaginary-part and real-part inequalities."""

    r_imag: float
    r_real: float


@dataclass(frozen=True)
class TestFunction:
    """g(x) = a·cos(ωx) + b·sin(ωx) + c, the trigonometric test functions of the Stein checks."""

    __test__ = False  # not a pytest class

    name: str
    omega: float
    cos_coef: float = 0.0
    sin_coef: float = 0.0
    constant: float = 0.0

    def g(self, x):
        return self.cos_coef * np.cos(self.omega * x) + self.sin_coef * np.sin(self.omega * x) + self.constant

    def g_prime(self, x):
        return self.omega * (self.sin_coef * np.cos(self.omega * x) - self.cos_coef * np.sin(self.omega * x))


@dataclass(frozen=True)
class SmoothTestFunction:
    """Any differentiable g with a non-oscillating integrand, e.g. g(x) = x."""

    __test__ = False

    name: str
    g: Callable[[float], float]
    g_prime: Callable[[float], float]


@dataclass(frozen=True)
class VerificationRow:
    omega: float
    r_imag: float
    r_real: float
    stein_g1: float
    stein_g2: float


def moment_arrays(model: NoiseModel, omega) -> tuple[np.ndarray, np.ndarray]:
    """(v_c, v_s) for scalar or array ``omega``.

    Written in terms of d(ω) = 1 - φ_R(ω):

        v_c = ½ + ½φ_R(2ω) - φ_R²(ω) = 2d(ω) - d(ω)² - ½d(2ω)
        v_s = ½ - ½φ_R(2ω) - φ_I²(ω) = ½d(2ω) - φ_I²(ω)

    which keeps both accurate as ω → 0. φ_I is identically zero for the
    built-in (symmetric) families.
    """
    omega = np.asarray(omega, dtype=float)
    d1 = np.asarray(model.cf_complement(omega), dtype=float)
    d2 = np.asarray(model.cf_complement(2.0 * omega), dtype=float)
    v_c = np.maximum(2.0 * d1 - d1 * d1 - 0.5 * d2, 0.0)
    v_s = np.maximum(0.5 * d2, 0.0)
    return v_c, v_s


def trig_moments(model: NoiseModel, omega: float) -> TrigMoments:
    v_c, v_s = moment_arrays(model, float(omega))
    return TrigMoments(v_c=float(v_c), v_s=float(v_s))


def cosine_test_function(model: NoiseModel, omega: float) -> TestFunction:
    """g₁(x) = cos(ωx) - φ_R(ω)."""
    return TestFunction(name="g1", omega=omega, cos_coef=1.0, constant=-model.cf(omega).phi_r)


def sine_test_function(model: NoiseModel, omega: float) -> TestFunction:
    """g₂(x) = sin(ωx) - φ_I(ω)."""
    return TestFunction(name="g2", omega=omega, sin_coef=1.0, constant=-model.cf(omega).phi_i)


def stein_check(model: NoiseModel, test_function: TestFunction | SmoothTestFunction, spec: QuadratureSpec | None = None) -> float:
    """|E[g(η)s(η)] + E[g'(η)]| by quadrature.

    Stein's identity makes this zero for any g with g·p → 0 at ±∞. For the
    built-in g₁, g₂ callers should treat a residual below 1e-6 as a pass.
    The oscillating parts of a :class:`TestFunction` are integrated as Fourier
    integrals so that heavy tails (Cauchy) converge. Quadrature failures
    propagate as NumericFailure.
    """
    if model.family is NoiseFamily.UNIFORM:
        raise UnsupportedModelError("Stein's identity needs a density that vanishes smoothly at its support edges; uniform noise does not")
    spec = model.quadrature_spec(spec)
    tf = test_function

    def score_density(x: float) -> float:
        return model.score(x) * model.pdf(x)

    if isinstance(tf, SmoothTestFunction):
        score_term = integrate(lambda x: tf.g(x) * score_density(x), -math.inf, math.inf, spec, breakpoints=model.breakpoints)
        derivative_term = integrate(lambda x: tf.g_prime(x) * model.pdf(x), -math.inf, math.inf, spec, breakpoints=model.breakpoints)
        return abs(score_term + derivative_term)

    def fourier(h: Callable[[float], float], weight: str) -> float:
        return integrate(h, -math.inf, math.inf, spec, breakpoints=model.breakpoints, weight=weight, wvar=tf.omega)

    score_term = 0.0
    derivative_term = 0.0
    if tf.cos_coef:
        score_term += tf.cos_coef * fourier(score_density, "cos")
        derivative_term -= tf.cos_coef * tf.omega * fourier(model.pdf, "sin")
    if tf.sin_coef:
        score_term += tf.sin_coef * fourier(score_density, "sin")
        derivative_term += tf.sin_coef * tf.omega * fourier(model.pdf, "cos")
    if tf.constant:
        score_term += tf.constant * integrate(score_density, -math.inf, math.inf, spec, breakpoints=model.breakpoints)

    residual = abs(score_term + derivative_term)
    logger.debug(f"stein_check {model.family.value} {tf.name} at omega={tf.omega!r}: E[gs]={score_term!r} E[g']={derivative_term!r}")
    return residual


def theorem1_residuals(model: NoiseModel, omega: float) -> Theorem1Residuals:
    """Slacks I·v_c - ω²φ_I² and I·v_s - ω²φ_R², both zero exactly at ω = 0.

    Raises:
        UnsupportedModelError: when the Fisher information is infinite

    """
    if not model.has_finite_fisher:
        raise UnsupportedModelError(f"{model.family.value} noise has infinite Fisher information; the inequalities are vacuous")
    info = model.fisher()
    moments = trig_moments(model, omega)
    phi = model.cf(omega)
    w2 = omega * omega
    return Theorem1Residuals(
        r_imag=info * moments.v_c - w2 * phi.phi_i * phi.phi_i,
        r_real=info * moments.v_s - w2 * phi.phi_r * phi.phi_r,
    )


def fisher_lower_bound(model: NoiseModel, omega_grid: Iterable[float]) -> float:
    """Largest cf-only lower bound on I(η) over ``omega_grid``.

    Each inequality rearranges to ω²φ_I²/v_c < I and ω²φ_R²/v_s < I for ω ≠ 0,
    so the bound needs nothing but the characteristic function. Defined for
    every family, including Uniform.
    """
    best = 0.0
    for omega in omega_grid:
        if omega == 0:
            continue
        moments = trig_moments(model, omega)
        phi = model.cf(omega)
        w2 = omega * omega
        if moments.v_c > 0:
            best = max(best, w2 * phi.phi_i**2 / moments.v_c)
        if moments.v_s > 0:
            best = max(best, w2 * phi.phi_r**2 / moments.v_s)
    return best


def theorem1_report(model: NoiseModel, omega_grid: Iterable[float], spec: QuadratureSpec | None = None) -> list[VerificationRow]:
    """Residuals and both Stein checks at each grid frequency."""
    rows = []
    for omega in omega_grid:
        omega = float(omega)
        residuals = theorem1_residuals(model, omega)
        rows.append(
            VerificationRow(
                omega=omega,
                r_imag=residuals.r_imag,
                r_real=residuals.r_real,
                stein_g1=stein_check(model, cosine_test_function(model, omega), spec),
                stein_g2=stein_check(model, sine_test_function(model, omega), spec),
            )
        )
    return rows
