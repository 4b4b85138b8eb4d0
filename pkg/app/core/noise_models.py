"""Sensing-noise families: density, score, characteristic function, sampler, Fisher information.

All four built-ins are zero-location and symmetric, so their characteristic
functions are real. The location parameter lives in the simulator, never here.
"""

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.errors import ConfigurationError, UnsupportedModelError
from app.core.numerics import QuadratureSpec, integrate
from app.core.random_streams import RandomStream

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)


class NoiseFamily(str, Enum):
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    CAUCHY = "cauchy"
    UNIFORM = "uniform"


# Native scale key per family, as used in the `family:key=value` grammar
SCALE_KEYS = {
    NoiseFamily.GAUSSIAN: "sigma",
    NoiseFamily.LAPLACE: "b",
    NoiseFamily.CAUCHY: "gamma",
    NoiseFamily.UNIFORM: "a",
}

_SPEC_PATTERN = re.compile(r"^\s*(?P<family>[a-z]+)\s*:\s*(?P<key>[a-z]+)\s*=\s*(?P<value>[^\s]+)\s*$")


@dataclass(frozen=True)
class CfValue:
    """Real and imaginary parts of a characteristic function at one frequency."""

    phi_r: float
    phi_i: float

    @property
    def modulus_sq(self) -> float:
        return self.phi_r * self.phi_r + self.phi_i * self.phi_i

    def as_complex(self) -> complex:
        return complex(self.phi_r, self.phi_i)


def _reduced_sin(t: np.ndarray) -> np.ndarray:
    """sin(t) after reducing t by the nearest binary64 multiple of π.

    Arguments that are exact float multiples of ``math.pi`` therefore give an
    exact zero, which keeps the sinc zeros (uniform-noise poles) exact.
    """
    k = np.rint(t / math.pi)
    r = t - k * math.pi
    sign = np.where(np.mod(k, 2.0) == 0.0, 1.0, -1.0)
    return sign * np.sin(r)


def _sinc_complement(t: np.ndarray) -> np.ndarray:
    """1 - sin(t)/t without cancellation near t = 0."""
    t = np.abs(t)
    t2 = t * t
    series = t2 * (1 / 6 - t2 * (1 / 120 - t2 * (1 / 5040 - t2 * (1 / 362880 - t2 / 39916800))))
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = 1.0 - _reduced_sin(t) / np.where(t == 0.0, 1.0, t)
    return np.where(t < 0.1, series, direct)


def _as_output(values: np.ndarray, scalar: bool) -> Any:
    return float(values) if scalar else values


class NoiseModel(BaseModel):
    """A zero-location member of one of the built-in families.

    ``scale`` has the family-native meaning: Gaussian σ (standard deviation),
    Laplace b (variance 2b²), Cauchy γ, Uniform a (support [-a, a], variance a²/3).
    """

    model_config = ConfigDict(frozen=True)

    family: NoiseFamily
    scale: float = Field(gt=0, allow_inf_nan=False)

    # ---- construction helpers -------------------------------------------------

    @classmethod
    def gaussian(cls, sigma: float) -> "NoiseModel":
        return cls(family=NoiseFamily.GAUSSIAN, scale=sigma)

    @classmethod
    def laplace(cls, b: float) -> "NoiseModel":
        return cls(family=NoiseFamily.LAPLACE, scale=b)

    @classmethod
    def cauchy(cls, gamma: float) -> "NoiseModel":
        return cls(family=NoiseFamily.CAUCHY, scale=gamma)

    @classmethod
    def uniform(cls, a: float) -> "NoiseModel":
        return cls(family=NoiseFamily.UNIFORM, scale=a)

    @classmethod
    def from_variance(cls, family: NoiseFamily | str, variance: float) -> "NoiseModel":
        """Build the family member with the given variance."""
        family = NoiseFamily(family)
        if variance <= 0:
            raise ConfigurationError(f"variance must be positive, got {variance}")
        if family is NoiseFamily.GAUSSIAN:
            return cls.gaussian(math.sqrt(variance))
        if family is NoiseFamily.LAPLACE:
            return cls.laplace(math.sqrt(variance / 2.0))
        if family is NoiseFamily.UNIFORM:
            return cls.uniform(math.sqrt(3.0 * variance))
        raise UnsupportedModelError("Cauchy noise has no variance; parameterize it by gamma")

    def scaled(self, alpha: float) -> "NoiseModel":
        """Model of alpha * eta. Symmetry makes the sign of alpha irrelevant."""
        if alpha == 0:
            raise ConfigurationError("scale factor must be non-zero")
        return NoiseModel(family=self.family, scale=abs(alpha) * self.scale)

    @property
    def scale_key(self) -> str:
        return SCALE_KEYS[self.family]

    @property
    def params(self) -> dict[str, float]:
        return {self.scale_key: self.scale}

    @property
    def has_finite_fisher(self) -> bool:
        return self.family is not NoiseFamily.UNIFORM

    @property
    def variance_defined(self) -> bool:
        return self.family is not NoiseFamily.CAUCHY

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the density or its derivative is not smooth (plus the centre)."""
        if self.family is NoiseFamily.UNIFORM:
            return (-self.scale, 0.0, self.scale)
        return (0.0,)

    def quadrature_spec(self, spec: QuadratureSpec | None = None) -> QuadratureSpec:
        """``spec`` with its tail cut expressed in units of this model's scale."""
        spec = spec or QuadratureSpec()
        return spec.model_copy(update={"tail_cut": spec.tail_cut * self.scale})

    # ---- density and score ----------------------------------------------------

    def pdf(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                out = np.exp(-0.5 * (x / s) ** 2) / (s * SQRT_2PI)
            case NoiseFamily.LAPLACE:
                out = np.exp(-np.abs(x) / s) / (2.0 * s)
            case NoiseFamily.CAUCHY:
                out = s / (math.pi * (s * s + x * x))
            case NoiseFamily.UNIFORM:
                out = np.where(np.abs(x) <= s, 1.0 / (2.0 * s), 0.0)
        return _as_output(out, scalar)

    def log_pdf(self, x):
        scalar = np.ndim(x) == 0
        with np.errstate(divide="ignore"):
            out = np.log(np.asarray(self.pdf(x), dtype=float))
        return _as_output(out, scalar)

    def score(self, x):
        """p'(x)/p(x). At kinks the one-sided limit from above is returned."""
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                out = -x / (s * s)
            case NoiseFamily.LAPLACE:
                out = np.where(x >= 0.0, -1.0 / s, 1.0 / s)
            case NoiseFamily.CAUCHY:
                out = -2.0 * x / (s * s + x * x)
            case NoiseFamily.UNIFORM:
                out = np.where((x >= -s) & (x < s), 0.0, np.nan)
        return _as_output(out, scalar)

    # ---- characteristic function ---------------------------------------------

    def cf_real(self, omega):
        """Real part of φ(ω); vectorised over ``omega``."""
        scalar = np.ndim(omega) == 0
        w = np.abs(np.asarray(omega, dtype=float))
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                out = np.exp(-0.5 * (s * w) ** 2)
            case NoiseFamily.LAPLACE:
                out = 1.0 / (1.0 + (s * w) ** 2)
            case NoiseFamily.CAUCHY:
                out = np.exp(-s * w)
            case NoiseFamily.UNIFORM:
                t = s * w
                with np.errstate(divide="ignore", invalid="ignore"):
                    out = np.where(t == 0.0, 1.0, _reduced_sin(t) / np.where(t == 0.0, 1.0, t))
        return _as_output(out, scalar)

    def cf_complement(self, omega):
        """1 - φ_R(ω), accurate when φ_R(ω) is close to one."""
        scalar = np.ndim(omega) == 0
        w = np.abs(np.asarray(omega, dtype=float))
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                out = -np.expm1(-0.5 * (s * w) ** 2)
            case NoiseFamily.LAPLACE:
                t = (s * w) ** 2
                out = t / (1.0 + t)
            case NoiseFamily.CAUCHY:
                out = -np.expm1(-s * w)
            case NoiseFamily.UNIFORM:
                out = _sinc_complement(s * w)
        return _as_output(out, scalar)

    def cf(self, omega: float) -> CfValue:
        """φ(ω) = E[exp(jωη)]. Every built-in density is even, so φ_I = 0."""
        return CfValue(phi_r=float(self.cf_real(float(omega))), phi_i=0.0)

    # ---- sampling --------------------------------------------------------------

    def sample(self, stream: RandomStream, n: int) -> np.ndarray:
        """``n`` iid draws, consuming only ``stream``."""
        if n < 1:
            raise ConfigurationError(f"sample size must be at least 1, got {n}")
        rng = stream.generator
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                return rng.normal(0.0, s, n)
            case NoiseFamily.LAPLACE:
                return rng.laplace(0.0, s, n)
            case NoiseFamily.CAUCHY:
                # inverse CDF
                return s * np.tan(math.pi * (rng.random(n) - 0.5))
            case NoiseFamily.UNIFORM:
                return rng.uniform(-s, s, n)

    # ---- moments and information ---------------------------------------------

    def fisher(self) -> float:
        """Fisher information about a location parameter; +inf for Uniform."""
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                return 1.0 / (s * s)
            case NoiseFamily.LAPLACE:
                return 1.0 / (s * s)
            case NoiseFamily.CAUCHY:
                return 1.0 / (2.0 * s * s)
            case NoiseFamily.UNIFORM:
                return math.inf

    def variance(self) -> float:
        """Variance; +inf for Cauchy, whose ``variance_defined`` flag is False."""
        s = self.scale
        match self.family:
            case NoiseFamily.GAUSSIAN:
                return s * s
            case NoiseFamily.LAPLACE:
                return 2.0 * s * s
            case NoiseFamily.CAUCHY:
                return math.inf
            case NoiseFamily.UNIFORM:
                return s * s / 3.0

    def fisher_quadrature(self, spec: QuadratureSpec | None = None) -> float:
        """Fisher information as ∫ s(x)² p(x) dx, split at the model's breakpoints."""
        if not self.has_finite_fisher:
            raise UnsupportedModelError("Uniform noise has no density derivative on its support edges; its Fisher information is infinite")
        spec = self.quadrature_spec(spec)
        return integrate(lambda x: self.score(x) ** 2 * self.pdf(x), -math.inf, math.inf, spec, breakpoints=self.breakpoints)


def empirical_cf(samples: np.ndarray, omega: float) -> CfValue:
    """L⁻¹ Σ exp(jω x_l) as a CfValue."""
    phase = omega * np.asarray(samples, dtype=float)
    return CfValue(phi_r=float(np.mean(np.cos(phase))), phi_i=float(np.mean(np.sin(phase))))


def parse_model_spec(text: str) -> NoiseModel:
    """Parse ``family:key=value``, e.g. ``laplace:b=0.7071`` or ``gaussian:var=2``."""
    match = _SPEC_PATTERN.match(text.lower())
    if not match:
        raise ConfigurationError(f"Invalid model spec '{text}', expected family:key=value")
    try:
        family = NoiseFamily(match["family"])
    except ValueError:
        known = ", ".join(f.value for f in NoiseFamily)
        raise ConfigurationError(f"Unknown noise family '{match['family']}' (known: {known})") from None
    try:
        value = float(match["value"])
    except ValueError:
        raise ConfigurationError(f"Model parameter '{match['value']}' is not a number") from None
    if not math.isfinite(value) or value <= 0:
        raise ConfigurationError(f"Model parameter must be a positive finite number, got {value}")

    key = match["key"]
    if key == SCALE_KEYS[family]:
        return NoiseModel(family=family, scale=value)
    if key == "var" and family is not NoiseFamily.CAUCHY:
        return NoiseModel.from_variance(family, value)
    raise ConfigurationError(f"Unknown parameter '{key}' for {family.value}; use {SCALE_KEYS[family]}" + ("" if family is NoiseFamily.CAUCHY else " or var"))


def format_model_spec(model: NoiseModel) -> str:
    return f"{model.family.value}:{model.scale_key}={model.scale!r}"
