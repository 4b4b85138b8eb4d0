"""AsV sweep tool - AsV(ω) and 1/I on an ω grid, for the figure data."""

import logging
from typing import Any

from app.core.base_tool import BaseTool
from app.core.efficiency import asv_sweep
from app.core.report_writer import render_csv
from app.schemas import SweepRequest

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("omega", "asv", "asv_db", "inv_fisher", "inv_fisher_db")


class SweepTool(BaseTool):
    """Tabulate AsV(ω) against the inverse Fisher information."""

    @property
    def description(self) -> str:
        return "Evaluates AsV(ω) and 1/I(η), linear and in dB, over an ascending ω grid"

    def analyze(self, params: dict[str, Any]) -> dict[str, Any]:
        self.check_format(params, ("csv",))
        request = SweepRequest(**self.request_fields(params))
        rows = asv_sweep(request.model, request.grid(), self.config)
        poles = sum(1 for row in rows if row.asv is None)
        if poles:
            self.warn(f"AsV is infinite at {poles} of {len(rows)} grid points")
        table = [(r.omega, r.asv, r.asv_db, r.inv_fisher, r.inv_fisher_db) for r in rows]
        return {
            "document": render_csv(SWEEP_HEADER, table, self.config_echo(request)),
            "rows": len(rows),
            "poles": poles,
        }
