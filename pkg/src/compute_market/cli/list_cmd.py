"""compute-market list-scenarios: Show the scenario and parameter files that can be named."""

from __future__ import annotations

from typing import Annotated

import typer
from rich.table import Table

from compute_market.cli.output import console, fail
from compute_market.config import get_settings
from compute_market.exceptions import ComputeMarketError
from compute_market.sim.registry import ScenarioRegistry

VALID_KINDS = ["scenario", "game", "legacy"]


def list_scenarios(
    kind: Annotated[
        str | None, typer.Option("--kind", "-k", help=f"Filter: {', '.join(VALID_KINDS)}")
    ] = None,
    search: Annotated[
        str | None, typer.Option("--search", "-s", help="Keyword in name, description or tags")
    ] = None,
) -> None:
    """List built-in and user scenario files."""
    if kind is not None and kind not in VALID_KINDS:
        console.print(f"[red]Invalid kind. Choose from: {', '.join(VALID_KINDS)}[/red]")
        raise typer.Exit(1)

    try:
        settings = get_settings()
        settings.require_scenario_dirs_exist()
        registry = ScenarioRegistry(settings.scenario_directories)
        entries = registry.search(search) if search else registry.scenarios
    except ComputeMarketError as e:
        fail(e)

    if kind is not None:
        entries = [s for s in entries if s["kind"] == kind]
    if not entries:
        console.print("[yellow]No matching scenarios.[/yellow]")
        return

    table = Table(title="Available Scenarios")
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("Kind", style="green", no_wrap=True)
    table.add_column("Description")
    table.add_column("Tags", style="dim")
    for s in entries:
        table.add_row(
            s["name"],
            s["kind"],
            " ".join(str(s.get("description", "")).split())[:60],
            ", ".join(s.get("tags", [])),
        )
    console.print(table)
