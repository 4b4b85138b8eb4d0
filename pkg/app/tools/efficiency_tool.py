"""Efficiency tool - relative efficiency E(η) of one noise model."""

import logging
from typing import Any

from app.core.base_tool import BaseTool
from app.core.efficiency import relative_efficiency
from app.core.noise_models import NoiseModel
from app.core.report_writer import render_csv, render_json
from app.schemas import EfficiencyReport, EfficiencyRequest

logger = logging.getLogger(__name__)

EFFICIENCY_FIELDS = ("dist", "params", "fisher_information", "inf_asv", "omega_star", "relative_efficiency", "method", "efficiency_db")


def efficiency_record(model: NoiseModel, report: EfficiencyReport) -> dict[str, Any]:
    """Report fields in document order."""
    return {
        "dist": model.family.value,
        "params": model.params,
        "fisher_information": report.fisher,
        "inf_asv": report.inf_asv,
        "omega_star": report.omega_star,
        "relative_efficiency": report.efficiency,
        "method": report.method,
        "efficiency_db": report.efficiency_db,
    }


class EfficiencyTool(BaseTool):
    """Compute I(η), inf AsV(ω) and E(η) = [I · inf AsV]⁻¹."""

    @property
    def description(self) -> str:
        return "Computes the relative efficiency of constant-modulus phase transmission for one noise model"

    def analyze(self, params: dict[str, Any]) -> dict[str, Any]:
        fmt = self.check_format(params, ("json", "csv"))
        request = EfficiencyRequest(**self.request_fields(params))
        report = relative_efficiency(request.model, request.theta_r, request.method, self.config)
        record = efficiency_record(request.model, report)
        echo = self.config_echo(request)

        if fmt == "csv":
            flat = {**record, "params": ";".join(f"{k}={v!r}" for k, v in request.model.params.items())}
            document = render_csv(EFFICIENCY_FIELDS, [[flat[k] for k in EFFICIENCY_FIELDS]], echo)
        else:
            document = render_json({**record, "config": echo})
        return {"document": document, "report": report.model_dump(mode="json")}
