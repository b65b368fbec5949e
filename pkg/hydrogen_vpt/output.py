"""Tabular output: CSV with ``#`` metadata lines, or JSON with ``meta`` and ``data``."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Literal, Sequence

from pydantic import BaseModel, ConfigDict, Field

from .config import load_settings

OutputFormat = Literal["csv", "json"]


class RunConfig(BaseModel):
    """Fully resolved command-line configuration, embedded in every emitted file."""

    model_config = ConfigDict(frozen=True)

    command: Literal["potential", "ground-state", "weak-field", "strong-field", "partition", "units"]
    parameters: dict[str, Any] = Field(default_factory=dict)
    output_format: OutputFormat = "csv"
    output_path: str | None = None
    precision: int = Field(default_factory=lambda: load_settings().precision)


def format_number(value: Any, digits: int | None = None) -> str:
    """
    Fixed-width rendering of a number: ``digits`` significant digits,
    scientific notation for |x| outside [1e-3, 1e6).
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    digits = digits or load_settings().csv_digits
    if x == 0:
        return "0"
    if 1e-3 <= abs(x) < 1e6:
        decimals = max(digits - 1 - int(math.floor(math.log10(abs(x)))), 0)
        return f"{x:.{decimals}f}"
    return f"{x:.{digits - 1}e}"


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    try:
        x = float(value)
    except (TypeError, ValueError):
        return str(value)
    return x if math.isfinite(x) else str(x)


def render(
    columns: Sequence[str],
    rows: Sequence[dict[str, Any]],
    config: RunConfig,
    events: Sequence[dict[str, Any]] = (),
    details: dict[str, Any] | None = None,
) -> str:
    """
    Render a table with its metadata. ``details`` are result-level facts that
    belong to the whole table (conventions, integration box) rather than a row.
    """
    if config.output_format == "json":
        meta: dict[str, Any] = {"config": config.model_dump(), "columns": list(columns), "events": list(events)}
        if details:
            meta["details"] = {
                k: v if isinstance(v, (list, dict)) else _json_value(v) for k, v in details.items()
            }
        payload = {
            "meta": meta,
            "data": [{c: _json_value(row.get(c)) for c in columns} for row in rows],
        }
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    buffer = io.StringIO()
    buffer.write(f"# config: {json.dumps(config.model_dump(), sort_keys=True)}\n")
    if details:
        buffer.write(f"# details: {json.dumps(details, sort_keys=True)}\n")
    for event in events:
        buffer.write(f"# event: {json.dumps(event, sort_keys=True)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(c)) for c in columns])
    return buffer.getvalue()


def emit(text: str, path: str | None, stream: io.TextIOBase) -> None:
    if path is None:
        stream.write(text)
        return
    Path(path).write_text(text)
