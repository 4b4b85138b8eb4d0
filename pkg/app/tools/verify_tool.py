"""Verify tool - checks the Fisher/characteristic-function inequalities on an ω grid."""

import logging
from typing import Any

from app.core.base_tool import BaseTool, VerificationFailed
from app.core.cf_analysis import VerificationRow, theorem1_report
from app.core.report_writer import render_csv
from app.schemas import VerifyRequest

logger = logging.getLogger(__name__)

VERIFY_HEADER = ("omega", "r_imag", "r_real", "stein_g1", "stein_g2")


class VerifyTool(BaseTool):
    """Tabulate inequality slacks and Stein residuals; fail unless every row passes."""

    @property
    def description(self) -> str:
        return "Checks that both inequality slacks are positive and both Stein residuals vanish at each grid ω"

    def row_passes(self, row: VerificationRow) -> bool:
        return row.r_imag > 0 and row.r_real > 0 and row.stein_g1 < self.config.stein_pass and row.stein_g2 < self.config.stein_pass

    def analyze(self, params: dict[str, Any]) -> dict[str, Any]:
        self.check_format(params, ("csv",))
        request = VerifyRequest(**self.request_fields(params))
        rows = theorem1_report(request.model, request.grid(), self.config.quadrature)
        table = [(r.omega, r.r_imag, r.r_real, r.stein_g1, r.stein_g2) for r in rows]
        failures = [r.omega for r in rows if not self.row_passes(r)]
        data = {
            "document": render_csv(VERIFY_HEADER, table, self.config_echo(request)),
            "rows": len(rows),
            "failed_omegas": failures,
        }
        if failures:
            raise VerificationFailed(f"{len(failures)} of {len(rows)} rows failed verification (first at omega={failures[0]!r})", data)
        return data
