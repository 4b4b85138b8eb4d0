"""Bit-stable CSV and JSON documents.

Numbers go out with 17 significant digits, enough for any binary64 value to
read back unchanged. Infinite and undefined values become an empty CSV field
or a JSON ``null``. Every document carries the configuration that produced it:
JSON under a ``config`` key, CSV as a ``# config: {...}`` line above the header.
"""

import csv
import io
import json
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from app.core.errors import ConfigurationError

logger = logging.getLogger(__name__)

CONFIG_PREFIX = "# config: "


@dataclass
class CsvDocument:
    header: list[str]
    rows: list[list[float | str | None]]
    config: dict[str, Any] = field(default_factory=dict)


def format_number(value: Any) -> str:
    """17-significant-digit text for floats, plain text for ints, "" for None and non-finite values."""
    if value is None:
        return ""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        value = float(value)
        return format(value, ".17g") if math.isfinite(value) else ""
    return str(value)


def jsonable(value: Any) -> Any:
    """Plain JSON types, with non-finite floats mapped to ``None``."""
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple | np.ndarray):
        return [jsonable(v) for v in value]
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], config: Mapping[str, Any] | None = None) -> str:
    buffer = io.StringIO()
    if config is not None:
        buffer.write(CONFIG_PREFIX + json.dumps(jsonable(config), separators=(",", ":"), allow_nan=False) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"CSV row has {len(row)} fields, header has {len(header)}")
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def render_json(payload: Mapping[str, Any]) -> str:
    """Indented JSON that keeps the payload's key order."""
    return json.dumps(jsonable(payload), indent=2, allow_nan=False) + "\n"


def _parse_field(text: str) -> float | str | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text: str) -> CsvDocument:
    """Read a document produced by :func:`render_csv`; empty fields come back as ``None`` and non-numeric fields as text."""
    config: dict[str, Any] = {}
    body = []
    for line in text.splitlines():
        if line.startswith(CONFIG_PREFIX):
            config = json.loads(line[len(CONFIG_PREFIX) :])
        elif line.strip():
            body.append(line)
    if not body:
        raise ConfigurationError("CSV document has no header")
    records = list(csv.reader(body))
    header = records[0]
    rows = [[_parse_field(f) for f in record] for record in records[1:]]
    logger.debug(f"Parsed CSV: {len(rows)} rows x {len(header)} columns")
    return CsvDocument(header=header, rows=rows, config=config)
