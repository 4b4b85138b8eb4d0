"""Jinja2 rendering of the efficiency table."""

import logging
import math
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, select_autoescape

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent.parent / "templates"


def _num(value: Any, digits: int = 6) -> str:
    """Table cell text: ``digits`` significant digits, ∞ for infinities, a dash for missing values."""
    if value is None:
        return "—"
    if isinstance(value, str):
        return value
    value = float(value)
    if math.isinf(value):
        return "∞" if value > 0 else "-∞"
    return format(value, f".{digits}g")


class TableReportGenerator:
    """Render efficiency rows as a Markdown table."""

    def __init__(self, template_dir: Path = TEMPLATE_DIR):
        self.env = Environment(
            loader=FileSystemLoader(str(template_dir)),
            autoescape=select_autoescape(["html", "xml"]),
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self.env.filters["num"] = _num
        logger.debug(f"Jinja2 template engine initialized (templates: {template_dir})")

    def render_efficiency_table(self, rows: list[dict[str, Any]], theta_r: float, notes: list[str] | None = None) -> str:
        template = self.env.get_template("efficiency_table.md.j2")
        content = template.render(rows=rows, theta_r=theta_r, omega_max=2.0 * math.pi / theta_r, notes=notes or [])
        logger.info(f"Rendered efficiency table with {len(rows)} rows")
        return content
