"""compute-market sweep: Run a scenario over a parameter grid."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from compute_market.cli.output import console, fail, fmt, resolve_input
from compute_market.config import get_settings
from compute_market.exceptions import ComputeMarketError
from compute_market.sim.scenario import load_scenario
from compute_market.sim.sweep import parse_grid, write_sweep_csv
from compute_market.sim.sweep import sweep as run_sweep

SWEEP_FILE = "sweep.csv"


def sweep(
    config: Annotated[
        str, typer.Option("--config", "-c", help="Scenario file path or library name")
    ],
    grid: Annotated[
        list[str] | None,
        typer.Option("--grid", "-g", help="Grid dimension field=v1,v2,... (repeatable)"),
    ] = None,
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Directory for sweep.csv")
    ] = None,
    workers: Annotated[
        int | None, typer.Option("--workers", min=1, help="Worker processes (default: settings)")
    ] = None,
) -> None:
    """Simulate every grid point and compare with the closed-form predictions.

    Without --grid there are no points and sweep.csv holds only its header.
    """
    settings = get_settings()
    try:
        dims = parse_grid(grid or [])
        scenario = load_scenario(resolve_input(config))
        header, rows = run_sweep(scenario, dims, workers or settings.sweep_workers)
    except ComputeMarketError as e:
        fail(e)

    fields = [name for name, _ in dims]
    table = Table(title=f"Sweep ({len(rows)} points)")
    for name in fields:
        table.add_column(name, style="cyan", justify="right")
    for column in ("matches", "mediation_rate", "predicted_mediation_rate", "verification_rate"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(
            *(fmt(row.point[f]) for f in fields),
            fmt(row.metrics["matches"]),
            fmt(row.metrics["mediation_rate"]),
            fmt(row.predictions["predicted_mediation_rate"]),
            fmt(row.metrics["verification_rate"]),
        )
    console.print(table)

    if out is not None:
        path = write_sweep_csv(out / SWEEP_FILE, header, rows, settings.csv_precision)
        console.print(f"[green]Wrote[/green] {path}")
