"""Simulate tool - Monte Carlo campaign of the sensor network."""

import logging
from typing import Any

from app.core.base_tool import BaseTool
from app.core.campaign_orchestrator import run_campaign
from app.core.report_writer import render_csv, render_json
from app.schemas import CampaignSummary, SimConfig

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = tuple(CampaignSummary.model_fields)


class SimulateTool(BaseTool):
    """Run a campaign and report L·var(θ̂) next to the predicted AsV(ω)."""

    @property
    def description(self) -> str:
        return "Simulates L sensors over a Gaussian multiple-access channel and measures the estimator variance"

    def analyze(self, params: dict[str, Any]) -> dict[str, Any]:
        fmt = self.check_format(params, ("json", "csv"))
        config = SimConfig(**self.request_fields(params))
        summary = run_campaign(config, self.config, log_callback=logger.info)
        echo = self.config_echo(config)
        record = summary.model_dump()

        if fmt == "csv":
            document = render_csv(SUMMARY_FIELDS, [[record[k] for k in SUMMARY_FIELDS]], echo)
        else:
            document = render_json({**record, "config": echo})
        return {"document": document, "summary": record}
