"""Table tool - relative efficiency of every built-in noise family."""

import logging
from typing import Any

from app.core.base_tool import BaseTool
from app.core.efficiency import relative_efficiency
from app.core.report_generator import TableReportGenerator
from app.core.report_writer import render_json
from app.schemas import TableRequest
from app.tools.efficiency_tool import efficiency_record

logger = logging.getLogger(__name__)


class TableTool(BaseTool):
    """E(η) for Gaussian, Laplace, Cauchy and Uniform noise side by side."""

    @property
    def description(self) -> str:
        return "Builds the relative-efficiency table for all built-in noise families"

    def analyze(self, params: dict[str, Any]) -> dict[str, Any]:
        fmt = self.check_format(params, ("json", "md"))
        request = TableRequest(**self.request_fields(params))
        rows = [efficiency_record(model, relative_efficiency(model, request.theta_r, request.method, self.config)) for model in request.models()]
        echo = self.config_echo(request)

        if fmt == "md":
            md_rows = [{**row, "params": ", ".join(f"{k}={v:.6g}" for k, v in row["params"].items())} for row in rows]
            notes = ["ω* = limit0 means the infimum is the ω → 0 limit of AsV, the noise variance."]
            document = TableReportGenerator().render_efficiency_table(md_rows, request.theta_r, notes)
        else:
            document = render_json({"rows": rows, "config": echo})
        return {"document": document, "rows": len(rows)}
