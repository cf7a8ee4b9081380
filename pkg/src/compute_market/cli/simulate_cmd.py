"""compute-market simulate: Run a scenario on the ledger and report what happened."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from compute_market.cli.output import console, fail, fmt, resolve_input
from compute_market.config import get_settings
from compute_market.exceptions import ComputeMarketError
from compute_market.game.outcomes import Outcome
from compute_market.sim.metrics import Metrics
from compute_market.sim.runner import run_scenario
from compute_market.sim.scenario import load_scenario
from compute_market.sim.trace import write_run_outputs


def simulate(
    config: Annotated[
        str, typer.Option("--config", "-c", help="Scenario file path or library name")
    ],
    seed: Annotated[
        int | None, typer.Option("--seed", help="Override the scenario's seed")
    ] = None,
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Directory for trace.csv and metrics.txt")
    ] = None,
) -> None:
    """Simulate a scenario and summarize its outcomes."""
    try:
        path = resolve_input(config)
        scenario = load_scenario(path)
        result = run_scenario(scenario, seed=seed)
    except ComputeMarketError as e:
        fail(e)

    _print_summary(result.metrics)

    if out is not None:
        settings = get_settings()
        written = write_run_outputs(result, out, settings.csv_precision)
        for file in written:
            console.print(f"[green]Wrote[/green] {file}")


def _print_summary(m: Metrics) -> None:
    console.print(
        f"jobs_posted={m.jobs_posted} matches={m.matches} closed={m.jobs_closed} "
        f"timed_out={m.jobs_timed_out} unmatched={m.jobs_unmatched}"
    )
    console.print(
        f"mediation_rate={fmt(m.mediation_rate)} "
        f"verification_rate={fmt(m.verification_rate)} "
        f"conservation_residual={m.conservation_residual}"
    )

    table = Table(title="Outcomes")
    table.add_column("Outcome", style="cyan")
    table.add_column("Count", justify="right")
    table.add_column("Frequency", justify="right")
    table.add_column("Predicted", justify="right", style="green")
    for outcome in Outcome:
        predicted = m.predicted_outcomes.get(outcome)
        table.add_row(
            outcome.value,
            str(m.outcomes[outcome]),
            fmt(m.outcome_frequency(outcome)),
            "" if predicted is None else fmt(predicted),
        )
    console.print(table)

    if m.aborted_rounds:
        aborted = ", ".join(f"{code}={count}" for code, count in sorted(m.aborted_rounds.items()))
        console.print(f"[yellow]Aborted rounds:[/yellow] {aborted}")
    if m.unclassified:
        console.print(f"[yellow]Unclassified rounds:[/yellow] {m.unclassified}")
