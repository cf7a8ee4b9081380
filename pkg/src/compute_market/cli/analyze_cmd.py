"""compute-market analyze: Expected-utility tables and JC type for a parameter file."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from compute_market.cli.output import console, fail, fmt, resolve_input
from compute_market.config import get_settings
from compute_market.exceptions import ComputeMarketError
from compute_market.game.export import UTILITY_HEADER, utility_rows, write_csv
from compute_market.game.utilities import (
    classify_jc_type,
    expected_utilities,
    jc_type_thresholds,
    pure_equilibria,
    rp_execute_condition,
)
from compute_market.sim.scenario import load_game_params

UTILITIES_FILE = "utilities.csv"


def analyze(
    config: Annotated[
        str, typer.Option("--config", "-c", help="Parameter file path or library name")
    ],
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Directory for utilities.csv")
    ] = None,
) -> None:
    """Print both parties' expected utilities and what they imply."""
    try:
        params = load_game_params(resolve_input(config))
        rp, jc = expected_utilities(params)
        jc_type = classify_jc_type(params)
        thresholds = jc_type_thresholds(params)
        execute = rp_execute_condition(params)
        equilibria = pure_equilibria(params)
    except ComputeMarketError as e:
        fail(e)

    for violation in params.constraint_violations():
        console.print(f"[yellow]Constraint not met:[/yellow] {violation}")

    table = Table(title="Expected Utilities")
    table.add_column("Profile", style="cyan")
    table.add_column("RP", justify="right")
    table.add_column("JC", justify="right")
    for profile, rp_value in rp.as_dict().items():
        table.add_row(profile, fmt(rp_value), fmt(jc.as_dict()[profile]))
    console.print(table)

    console.print(f"jc_type={jc_type.value} ({jc_type.description})")
    console.print(
        f"c_v thresholds: execute={fmt(thresholds.execute)} deceive={fmt(thresholds.deceive)}"
    )
    console.print(
        f"rp_executes_when_verified={fmt(execute.exact)} margin={fmt(execute.margin)} "
        f"p_a^(n+1)>1/2={fmt(execute.sufficient)}"
    )
    if equilibria:
        profiles = ", ".join(f"({r.value}, {j.value})" for r, j in equilibria)
        console.print(f"pure equilibria: {profiles}")
    else:
        console.print("pure equilibria: none (mixed only)")

    if out is not None:
        settings = get_settings()
        path = write_csv(
            out / UTILITIES_FILE, UTILITY_HEADER, utility_rows(rp, jc), settings.csv_precision
        )
        console.print(f"[green]Wrote[/green] {path}")
