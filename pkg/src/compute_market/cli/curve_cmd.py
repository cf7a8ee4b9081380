"""compute-market dump-derivative-curve: Plot data for dU^JC/dp_a across p_a."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from compute_market.cli.output import console, fail, fmt, resolve_input
from compute_market.config import get_settings
from compute_market.exceptions import AnalysisError, ComputeMarketError, ConfigInvalid
from compute_market.game.equilibrium import derivative_curve, optimal_pa, zero_crossings
from compute_market.game.export import CURVE_HEADER, curve_rows, write_csv
from compute_market.sim.scenario import load_game_params

CURVE_FILE = "derivative_curve.csv"


def dump_derivative_curve(
    config: Annotated[
        str, typer.Option("--config", "-c", help="Parameter file path or library name")
    ],
    n: Annotated[str, typer.Option("--n", help="Replica counts, comma separated")] = "1,2,3,4",
    points: Annotated[
        int, typer.Option("--points", min=2, help="Grid points on [0, 1] per curve")
    ] = 101,
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Directory for derivative_curve.csv")
    ] = None,
) -> None:
    """Evaluate the JC's utility derivative and report where it crosses zero."""
    try:
        params = load_game_params(resolve_input(config))
        n_values = _parse_n(n)
        curve = derivative_curve(params, n_values, points)
    except ComputeMarketError as e:
        fail(e)

    crossings = zero_crossings(curve)
    table = Table(title="Zero crossings of dU^JC/dp_a")
    table.add_column("n", style="cyan", justify="right")
    table.add_column("Crossings (grid)", justify="right")
    table.add_column("Optimal p_a (bisection)", justify="right", style="green")
    for count in n_values:
        try:
            root = fmt(optimal_pa(params.model_copy(update={"n": count})))
        except AnalysisError:
            root = "-"
        found = ", ".join(fmt(x) for x in crossings[count]) or "-"
        table.add_row(str(count), found, root)
    console.print(table)

    if out is not None:
        path = write_csv(
            out / CURVE_FILE, CURVE_HEADER, curve_rows(curve), get_settings().csv_precision
        )
        console.print(f"[green]Wrote[/green] {path}")


def _parse_n(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigInvalid("--n", [f"replica counts must be integers: {text!r}"]) from e
    if not values or any(v <= 0 for v in values):
        raise ConfigInvalid("--n", [f"expected positive integers, got {text!r}"])
    return list(dict.fromkeys(values))
