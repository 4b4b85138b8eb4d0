"""
Unit tests for AsV(ω), its infimum and the relative efficiency.
"""

import math

import numpy as np
import pytest

from app.core.config import AnalysisSettings
from app.core.efficiency import (
    EfficiencyMethod,
    asv,
    asv_array,
    asv_closed_form,
    asv_sweep,
    cauchy_critical_constant,
    fisher_quadratic_form,
    inf_asv,
    inf_asv_closed_form,
    mean_vector,
    omega_domain,
    relative_efficiency,
    sigma_matrix,
    to_db,
)
from app.core.errors import DomainError, NumericFailure, UnsupportedModelError
from app.core.noise_models import NoiseModel
from app.schemas import OMEGA_LIMIT0

CLOSED_FORM_MODELS = [NoiseModel.gaussian(1.0), NoiseModel.from_variance("laplace", 1.0), NoiseModel.cauchy(1.0)]


class TestAsv:
    """Test AsV(ω) and its closed forms"""

    @pytest.mark.parametrize(
        "model,omega,expected",
        [
            (NoiseModel.gaussian(1.0), 1.0, math.sinh(1.0)),
            (NoiseModel.gaussian(1.0), 0.5, 1.010449),
            (NoiseModel.from_variance("laplace", 1.0), 1.0, 0.75),
            (NoiseModel.cauchy(1.0), 1.0, (math.e**2 - 1.0) / 2.0),
        ],
    )
    def test_values(self, model, omega, expected):
        assert asv(model, omega) == pytest.approx(expected, abs=1e-6)

    def test_uniform_pole(self, uniform):
        """φ_R vanishes at ω = π/a, so AsV is infinite there."""
        assert math.isinf(asv(uniform, math.pi))

    @pytest.mark.parametrize("model", CLOSED_FORM_MODELS, ids=lambda m: m.family.value)
    def test_closed_form_agrees(self, model):
        for omega in np.linspace(0.01, 3.0, 200):
            assert asv(model, float(omega)) == pytest.approx(asv_closed_form(model, float(omega)), rel=1e-12)

    @pytest.mark.parametrize("model", CLOSED_FORM_MODELS, ids=lambda m: m.family.value)
    def test_above_inverse_fisher(self, model):
        """Strictly above the Cramér-Rao bound 1/I(η) for every ω > 0."""
        for omega in np.linspace(0.01, 5.0, 200):
            assert asv(model, float(omega)) > 1.0 / model.fisher()

    def test_gaussian_non_decreasing(self, gaussian):
        values = asv_array(gaussian, np.linspace(0.015, 3.0, 200))
        assert np.all(np.diff(values) >= 0)

    @pytest.mark.parametrize("model", [NoiseModel.gaussian(1.3), NoiseModel.laplace(0.4), NoiseModel.uniform(2.0)], ids=lambda m: m.family.value)
    def test_small_omega_tends_to_variance(self, model):
        assert asv(model, 1e-3) == pytest.approx(model.variance(), abs=1e-5)

    def test_scale_covariance(self):
        """AsV of αη at ω equals α²·AsV of η at αω."""
        for model in CLOSED_FORM_MODELS:
            for alpha in (0.5, 3.0):
                for omega in (0.2, 0.9):
                    assert asv(model.scaled(alpha), omega) == pytest.approx(alpha**2 * asv(model, alpha * omega), rel=1e-12)

    @pytest.mark.parametrize("omega", [0.0, -1.0])
    def test_domain(self, gaussian, omega):
        with pytest.raises(DomainError):
            asv(gaussian, omega)
        with pytest.raises(DomainError):
            asv_closed_form(gaussian, omega)

    def test_closed_form_unsupported_for_uniform(self, uniform):
        with pytest.raises(UnsupportedModelError):
            asv_closed_form(uniform, 1.0)


class TestAsymptoticMoments:
    """Test the mean vector, the covariance and the Fisher quadratic form"""

    def test_mean_vector(self, gaussian):
        mean = mean_vector(gaussian, 1.0, math.pi / 2, 1.0)
        assert mean.zr_mean == pytest.approx(0.0, abs=1e-15)
        assert mean.zi_mean == pytest.approx(0.606531, abs=1e-6)

    def test_mean_vector_scales_with_power(self, laplace):
        base = mean_vector(laplace, 0.8, 1.1, 1.0)
        boosted = mean_vector(laplace, 0.8, 1.1, 4.0)
        assert boosted.zr_mean == pytest.approx(2.0 * base.zr_mean)
        assert boosted.zi_mean == pytest.approx(2.0 * base.zi_mean)

    def test_sigma_entries(self, gaussian):
        sigma = sigma_matrix(gaussian, 1.0, math.pi / 4, 1.0)
        assert sigma.s11 == pytest.approx(0.316060, abs=1e-6)
        assert sigma.s22 == pytest.approx(0.316060, abs=1e-6)
        assert sigma.s12 == pytest.approx(-0.116272, abs=1e-6)

    def test_sigma_determinant_is_rotation_invariant(self, gaussian):
        """det Σ = ρ² v_c v_s whatever θ."""
        for theta in (0.0, 0.7, 2.9):
            assert sigma_matrix(gaussian, 1.0, theta, 1.0).determinant == pytest.approx(0.086375, rel=1e-5)

    def test_sigma_trace(self, cauchy):
        sigma = sigma_matrix(cauchy, 0.6, 1.2, 2.0)
        assert sigma.trace == pytest.approx(2.0 * (1.0 - math.exp(-1.2)))

    @pytest.mark.parametrize("model", CLOSED_FORM_MODELS + [NoiseModel.uniform(1.0)], ids=lambda m: m.family.value)
    def test_quadratic_form_is_inverse_asv(self, model):
        """[∂z̄]ᵀΣ⁻¹[∂z̄] does not depend on θ and equals 1/AsV(ω)."""
        rng = np.random.default_rng(4)
        omega = 1.1
        for theta in rng.uniform(0.0, 2.0 * math.pi / omega, 20):
            assert fisher_quadratic_form(model, omega, float(theta), 1.0) == pytest.approx(1.0 / asv(model, omega), rel=1e-10)


class TestInfAsv:
    """Test the infimum of AsV over (0, 2π/θ_R]"""

    def test_gaussian_limit(self, gaussian):
        omega_star, value = inf_asv(gaussian, 2.0 * math.pi)
        assert omega_star == OMEGA_LIMIT0
        assert value == 1.0

    def test_laplace_interior(self, laplace):
        omega_star, value = inf_asv(laplace, math.pi)
        assert omega_star == pytest.approx(1.0, abs=1e-4)
        assert value == pytest.approx(0.75, abs=1e-6)

    def test_cauchy_interior(self, cauchy):
        omega_star, value = inf_asv(cauchy, math.pi)
        assert omega_star == pytest.approx(0.796812, abs=1e-5)
        assert value == pytest.approx(3.088277, abs=1e-6)

    def test_uniform_finite(self, uniform):
        _, value = inf_asv(uniform, math.pi)
        assert 0 < value < math.inf

    @pytest.mark.parametrize("model", CLOSED_FORM_MODELS, ids=lambda m: m.family.value)
    @pytest.mark.parametrize("theta_r", [0.5, math.pi, 8.0])
    def test_numeric_matches_closed_form(self, model, theta_r):
        """Numeric infimum agrees with the analytic one, including clipped domains."""
        closed_star, closed_value = inf_asv_closed_form(model, theta_r)
        numeric_star, numeric_value = inf_asv(model, theta_r)
        assert numeric_value == pytest.approx(closed_value, rel=1e-9)
        if closed_star == OMEGA_LIMIT0:
            assert numeric_star == OMEGA_LIMIT0
        else:
            assert numeric_star == pytest.approx(closed_star, abs=1e-4)

    def test_laplace_clipped(self, laplace):
        """ω* = 1/σ beyond 2π/θ_R moves to the domain edge."""
        omega_star, value = inf_asv_closed_form(laplace, 8.0)
        assert omega_star == pytest.approx(2.0 * math.pi / 8.0)
        assert value == pytest.approx(asv_closed_form(laplace, 2.0 * math.pi / 8.0))
        assert value > 0.75

    def test_cauchy_constant(self):
        c = cauchy_critical_constant()
        assert c == pytest.approx(1.593625, abs=1e-5)
        assert (c - 2.0) * math.exp(c) + 2.0 == pytest.approx(0.0, abs=1e-12)

    def test_omega_domain(self):
        settings = AnalysisSettings(omega_floor_fraction=0.01)
        assert omega_domain(math.pi, settings) == pytest.approx((0.02, 2.0))
        with pytest.raises(DomainError):
            omega_domain(0.0)

    def test_closed_form_unsupported_for_uniform(self, uniform):
        with pytest.raises(UnsupportedModelError):
            inf_asv_closed_form(uniform, math.pi)


class TestRelativeEfficiency:
    """Test E(η) = [I · inf AsV]⁻¹"""

    @pytest.mark.parametrize("method", ["auto", "numeric"])
    @pytest.mark.parametrize(
        "model,expected",
        [
            (NoiseModel.gaussian(1.0), 1.0),
            (NoiseModel.from_variance("laplace", 1.0), 2.0 / 3.0),
            (NoiseModel.cauchy(1.0), 0.647613),
            (NoiseModel.uniform(1.0), 0.0),
        ],
    )
    def test_table_values(self, model, expected, method):
        report = relative_efficiency(model, math.pi, method)
        assert report.efficiency == pytest.approx(expected, abs=1e-4)

    def test_exact_values(self, gaussian, laplace):
        assert relative_efficiency(gaussian, math.pi).efficiency == 1.0
        assert relative_efficiency(laplace, math.pi).efficiency == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_report_fields(self, cauchy):
        report = relative_efficiency(cauchy, math.pi)
        assert report.method == "closed_form"
        assert report.fisher == 0.5
        assert report.omega_star == pytest.approx(0.796812, abs=1e-6)
        assert report.efficiency_db == pytest.approx(10.0 * math.log10(report.efficiency))

    def test_uniform_extended_arithmetic(self, uniform):
        """Infinite Fisher information gives E = 0 and no dB value."""
        report = relative_efficiency(uniform, math.pi)
        assert report.method == "numeric"
        assert math.isinf(report.fisher)
        assert report.efficiency == 0.0
        assert report.efficiency_db is None

    def test_gaussian_limit_marker(self, gaussian):
        assert relative_efficiency(gaussian, 1.0).omega_star == OMEGA_LIMIT0
        assert relative_efficiency(gaussian, 1.0, EfficiencyMethod.NUMERIC).omega_star == OMEGA_LIMIT0

    def test_boundary_win_is_not_a_warning(self, gaussian, caplog):
        """The ω → 0 limit winning is the normal Gaussian outcome and logs at DEBUG only."""
        with caplog.at_level("DEBUG", logger="app.core.efficiency"):
            relative_efficiency(gaussian, 1.0, EfficiencyMethod.NUMERIC)
        boundary = [r for r in caplog.records if "boundary limit" in r.getMessage()]
        assert boundary and all(r.levelname == "DEBUG" for r in boundary)

    def test_numeric_search_survives_overflow(self, gaussian, caplog):
        """On a wide domain Gaussian AsV overflows for most of the grid; the search is capped, not abandoned."""
        with caplog.at_level("WARNING", logger="app.core.efficiency"):
            report = relative_efficiency(gaussian, 0.1, EfficiencyMethod.NUMERIC)
        assert report.omega_star == OMEGA_LIMIT0
        assert report.efficiency == 1.0
        assert any("overflows above" in r.getMessage() for r in caplog.records)

    def test_closed_form_rejects_uniform(self, uniform):
        with pytest.raises(UnsupportedModelError):
            relative_efficiency(uniform, math.pi, "closed_form")

    @pytest.mark.parametrize("model", CLOSED_FORM_MODELS, ids=lambda m: m.family.value)
    @pytest.mark.parametrize("alpha", [0.5, 3.0, 10.0])
    def test_scale_invariance(self, model, alpha):
        """Scaling the noise by α and the range by 1/α leaves E unchanged while ω* stays interior."""
        theta_r = 0.1
        base = relative_efficiency(model, theta_r)
        scaled = relative_efficiency(model.scaled(alpha), theta_r / alpha)
        assert scaled.efficiency == pytest.approx(base.efficiency, abs=1e-9)

    def test_bounded(self):
        rng = np.random.default_rng(31)
        for model in CLOSED_FORM_MODELS + [NoiseModel.uniform(1.0)]:
            for _ in range(5):
                scaled = model.scaled(float(rng.uniform(0.1, 10.0)))
                report = relative_efficiency(scaled, float(rng.uniform(0.1, 6.0)))
                assert 0.0 <= report.efficiency <= 1.0

    def test_fisher_bound_breach_is_reported(self, laplace, monkeypatch):
        """Half the true Laplace information puts E at 4/3, which must not be clamped away."""
        monkeypatch.setattr(NoiseModel, "fisher", lambda self: 1.0)
        with pytest.raises(NumericFailure, match="breaks the Fisher bound") as exc_info:
            relative_efficiency(laplace, math.pi)
        assert exc_info.value.best_estimate == pytest.approx(4.0 / 3.0)

    def test_rounding_overshoot_is_clamped(self, gaussian, monkeypatch):
        monkeypatch.setattr(NoiseModel, "fisher", lambda self: 1.0 / (1.0 + 1e-14))
        assert relative_efficiency(gaussian, math.pi).efficiency == 1.0


class TestAsvSweep:
    """Test the sweep rows behind the figures"""

    def test_gaussian_rows(self, gaussian):
        rows = asv_sweep(gaussian, [0.5, 1.0])
        assert [row.omega for row in rows] == [0.5, 1.0]
        assert rows[0].asv == pytest.approx(1.010449, abs=1e-6)
        assert rows[1].asv == pytest.approx(1.175201, abs=1e-6)
        assert rows[1].asv_db == pytest.approx(10.0 * math.log10(1.175201), abs=1e-5)
        assert all(row.inv_fisher == 1.0 and row.inv_fisher_db == 0.0 for row in rows)

    def test_uniform_pole_is_empty(self, uniform):
        rows = asv_sweep(uniform, [3.0, math.pi, 3.2])
        assert rows[1].asv is None and rows[1].asv_db is None
        assert rows[0].asv is not None and rows[2].asv is not None
        assert rows[0].inv_fisher == 0.0 and rows[0].inv_fisher_db is None

    def test_grid_must_be_positive(self, gaussian):
        with pytest.raises(DomainError):
            asv_sweep(gaussian, [0.0, 1.0])
        with pytest.raises(DomainError):
            asv_sweep(gaussian, [])

    @pytest.mark.parametrize("value,expected", [(1.0, 0.0), (10.0, 10.0), (0.0, None), (math.inf, None), (-1.0, None)])
    def test_to_db(self, value, expected):
        assert to_db(value) == expected
