"""Run output files: the ledger event log and the metrics summary."""

from __future__ import annotations

from pathlib import Path

from compute_market.ledger.events import write_events_csv
from compute_market.sim.runner import SimulationResult

TRACE_FILE = "trace.csv"
METRICS_FILE = "metrics.txt"


def write_run_outputs(result: SimulationResult, out_dir: Path, precision: int = 17) -> list[Path]:
    """Write ``trace.csv`` and ``metrics.txt`` under ``out_dir``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = write_events_csv(result.events, out_dir / TRACE_FILE)
    metrics = out_dir / METRICS_FILE
    metrics.write_text(result.metrics.to_text(precision), encoding="utf-8")
    return [trace, metrics]
