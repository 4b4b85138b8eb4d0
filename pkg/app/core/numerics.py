"""Numerical primitives: quadrature, bracketed minimisation, Lambert W and root finding.

Everything here is a pure function of its inputs.
"""

import logging
import math
from collections.abc import Callable, Sequence
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import integrate as sp_integrate, optimize as sp_optimize, special as sp_special

from app.core.errors import DomainError, NumericFailure

logger = logging.getLogger(__name__)

INV_E = math.exp(-1.0)
PHI_RATIO = 2.0 / (1.0 + math.sqrt(5.0))
DEFAULT_GRID_POINTS = 256


class QuadratureSpec(BaseModel):
    """Tolerances for :func:`integrate`."""

    model_config = ConfigDict(frozen=True)

    abs_tol: float = Field(default=1e-11, gt=0)
    rel_tol: float = Field(default=1e-10, gt=0)
    max_subdivisions: int = Field(default=500, ge=1)
    tail_cut: float = Field(default=60.0, gt=0, description="Half-width T separating the core from the tails")


def _quad_piece(f: Callable[[float], float], a: float, b: float, spec: QuadratureSpec, weight: str | None = None, wvar: float = 0.0):
    """Run QUADPACK on one piece and return (value, abserr, converged)."""
    kwargs = {"epsabs": spec.abs_tol, "epsrel": spec.rel_tol, "limit": spec.max_subdivisions, "full_output": 1}
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
        if math.isinf(b):
            kwargs["limlst"] = 100
    out = sp_integrate.quad(f, a, b, **kwargs)
    # QUADPACK appends a message only when ier != 0
    converged = len(out) == 3
    return float(out[0]), float(out[1]), converged


def _tail_piece(f: Callable[[float], float], a: float, b: float, spec: QuadratureSpec, weight: str | None, wvar: float):
    """A piece with ``a = -inf``. Weighted QAWF only integrates up to +inf, so those tails are reflected."""
    if weight is None:
        return _quad_piece(f, a, b, spec)
    sign = -1.0 if weight == "sin" else 1.0
    value, abserr, ok = _quad_piece(lambda u: f(-u), -b, math.inf, spec, weight, wvar)
    return sign * value, abserr, ok


def integrate(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    spec: QuadratureSpec | None = None,
    breakpoints: Sequence[float] = (),
    weight: Literal["cos", "sin"] | None = None,
    wvar: float = 0.0,
) -> float:
    """Integrate ``f`` (times ``cos(wvar·x)`` or ``sin(wvar·x)`` when ``weight`` is set) over ``[lower, upper]``.

    Either endpoint may be infinite. The range is split at ``±spec.tail_cut``
    and at ``breakpoints``. Without a weight the finite core goes to QAGS and
    infinite tails to QAGI, which maps ``[T, ∞)`` onto ``(0, 1]`` instead of
    truncating. With a weight the pieces go to QAWO and the tails to QAWF,
    which sums the oscillation cycles as a series.

    Raises:
        NumericFailure: when some piece did not converge and the summed error
            bound exceeds ``max(abs_tol, rel_tol * |I|)``

    """
    spec = spec or QuadratureSpec()
    if not lower < upper:
        raise DomainError(f"integrate requires lower < upper, got [{lower}, {upper}]")
    if weight is not None and wvar == 0.0:
        # cos(0·x) = 1 and sin(0·x) = 0
        if weight == "sin":
            return 0.0
        weight = None

    inner = {float(p) for p in breakpoints}
    if math.isinf(lower):
        inner.add(-spec.tail_cut)
    if math.isinf(upper):
        inner.add(spec.tail_cut)
    edges = [lower, *sorted(p for p in inner if lower < p < upper), upper]

    total = 0.0
    error = 0.0
    converged = True
    for a, b in zip(edges[:-1], edges[1:], strict=True):
        if math.isinf(a):
            value, abserr, ok = _tail_piece(f, a, b, spec, weight, wvar)
        else:
            value, abserr, ok = _quad_piece(f, a, b, spec, weight, wvar)
        total += value
        error += abserr
        converged = converged and ok

    if not converged and error > max(spec.abs_tol, spec.rel_tol * abs(total)):
        raise NumericFailure(
            f"Quadrature did not converge within {spec.max_subdivisions} subdivisions (estimate={total!r}, error={error:.3e})",
            best_estimate=total,
            error_bound=error,
        )
    logger.debug(f"integrate over {len(edges) - 1} pieces: value={total!r} error={error:.2e}")
    return total


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float, max_iterations: int = 200) -> tuple[float, float]:
    """Golden-section search on ``[lo, hi]``; the endpoints stay eligible."""
    x_lo, x_hi = lo, hi
    x1 = x_hi - PHI_RATIO * (x_hi - x_lo)
    x2 = x_lo + PHI_RATIO * (x_hi - x_lo)
    f1, f2 = f(x1), f(x2)
    iteration = 0
    while iteration < max_iterations and abs(x_hi - x_lo) > tol:
        if f2 > f1:
            x_hi, x2, f2 = x2, x1, f1
            x1 = x_hi - PHI_RATIO * (x_hi - x_lo)
            f1 = f(x1)
        else:
            x_lo, x1, f1 = x1, x2, f2
            x2 = x_lo + PHI_RATIO * (x_hi - x_lo)
            f2 = f(x2)
        iteration += 1

    x_best, f_best = (x1, f1) if f1 <= f2 else (x2, f2)
    for x_edge in (lo, hi):
        f_edge = f(x_edge)
        if f_edge < f_best:
            x_best, f_best = x_edge, f_edge
    return x_best, f_best


def minimize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> tuple[float, float]:
    """Global-on-a-grid scalar minimisation.

    A uniform grid of ``grid_points`` values is scanned, then golden-section
    search refines the two cells around the best grid point.

    Returns:
        ``(argmin, min)``

    Raises:
        NumericFailure: when more than half of the grid values are not finite

    """
    if not lo < hi:
        raise DomainError(f"minimize_scalar requires lo < hi, got [{lo}, {hi}]")
    grid = np.linspace(lo, hi, max(grid_points, 3))
    values = np.array([f(float(x)) for x in grid], dtype=float)
    finite = np.isfinite(values)
    if np.count_nonzero(~finite) > 0.5 * grid.size:
        raise NumericFailure(f"Objective is non-finite at {np.count_nonzero(~finite)} of {grid.size} grid points")

    masked = np.where(finite, values, np.inf)
    best = int(np.argmin(masked))
    a = float(grid[max(best - 1, 0)])
    b = float(grid[min(best + 1, grid.size - 1)])

    def guarded(x: float) -> float:
        y = f(x)
        return y if math.isfinite(y) else math.inf

    x_star, f_star = golden_section(guarded, a, b, tol)
    if masked[best] < f_star:
        x_star, f_star = float(grid[best]), float(masked[best])
    logger.debug(f"minimize_scalar on [{lo:.6g}, {hi:.6g}]: grid best {grid[best]:.6g}, refined {x_star:.12g} -> {f_star:.12g}")
    return x_star, f_star


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14) -> float:
    """Bracketed root of ``f`` on ``[lo, hi]`` (Brent's method)."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise DomainError(f"find_root needs a sign change on [{lo}, {hi}]")
    return float(sp_optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200))


def _halley_polish(x: float, w: float, iterations: int = 4) -> float:
    for _ in range(iterations):
        ew = math.exp(w)
        residual = w * ew - x
        if residual == 0.0:
            break
        w1 = w + 1.0
        if w1 == 0.0:
            break
        step = residual / (ew * w1 - (w + 2.0) * residual / (2.0 * w1))
        w -= step
        if abs(step) <= 1e-16 * (1.0 + abs(w)):
            break
    return w


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function for real ``x >= -1/e``.

    scipy provides the starting value; Halley steps polish it, and a bracketed
    root solve takes over if the residual is still above 1e-12·max(1, |x|).

    Raises:
        DomainError: for ``x < -1/e``

    """
    if math.isnan(x):
        raise DomainError("lambert_w0 is undefined for NaN")
    # w·e^w evaluated at w = -1 can land a few ulps below -1/e
    if x <= -INV_E:
        if x >= -INV_E - 4 * np.finfo(float).eps:
            return -1.0
        raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf

    w = float(sp_special.lambertw(x, 0).real)
    if math.isfinite(w):
        if w <= -1.0:
            return -1.0
        w = _halley_polish(x, w)

    if not math.isfinite(w) or w < -1.0 or abs(w * math.exp(w) - x) > 1e-12 * max(1.0, abs(x)):
        logger.debug(f"lambert_w0({x!r}): scipy/Halley result {w!r} rejected, falling back to bracketed solve")
        hi = max(1.0, math.log1p(abs(x)) + 1.0)
        w = find_root(lambda v: v * math.exp(v) - x, -1.0, hi)
    return w
