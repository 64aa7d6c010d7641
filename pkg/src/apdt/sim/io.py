"""File formats: latency traces (CSV) and simulation reports (JSON/CSV)."""

from __future__ import annotations

import csv
import json

from ..errors import MisalignedTrace, SchemaViolation
from .types import SimulationReport


def load_trace(path: str) -> list[tuple[int, float]]:
    """Read a real-world latency trace: header ``t_seconds,latency_ms``."""
    out: list[tuple[int, float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "t_seconds" not in reader.fieldnames \
                or "latency_ms" not in reader.fieldnames:
            raise MisalignedTrace(f"{path}: expected header t_seconds,latency_ms")
        for row in reader:
            out.append((int(row["t_seconds"]), float(row["latency_ms"])))
    return out


def save_report(report: SimulationReport, path: str) -> None:
    if path.endswith(".csv"):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json_text())


def load_report(path: str) -> SimulationReport:
    with open(path, encoding="utf-8") as fh:
        try:
            return SimulationReport.from_json(json.load(fh))
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise SchemaViolation(f"report file {path}: {e}") from e
