"""compute-market legacy-ne: The earlier comply/disobey model and its honest equilibrium."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated

import typer
from rich.table import Table

from compute_market.cli.output import console, fail, fmt, resolve_input
from compute_market.config import get_settings
from compute_market.exceptions import ComputeMarketError, ConfigInvalid
from compute_market.game.export import write_csv
from compute_market.game.legacy import (
    LegacyStrategy,
    honest_is_best_response,
    legacy_honest_equilibrium,
    legacy_sweep,
    legacy_utilities,
)
from compute_market.game.params import LegacyParams
from compute_market.sim.scenario import load_legacy_params

LEGACY_FILE = "legacy.csv"
LEGACY_SWEEP_FILE = "legacy_sweep.csv"


def legacy_ne(
    config: Annotated[
        str, typer.Option("--config", "-c", help="Parameter file path or library name")
    ],
    grid: Annotated[
        str | None,
        typer.Option("--grid", help="Vary one parameter, e.g. p=0.05,0.1,0.2"),
    ] = None,
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Directory for the CSV tables")
    ] = None,
) -> None:
    """Print the 2x2 utility table and whether honesty is an equilibrium."""
    try:
        lp = load_legacy_params(resolve_input(config))
        table = legacy_utilities(lp)
        eq = legacy_honest_equilibrium(lp)
        rows = legacy_sweep(lp, *_parse_vary(grid)) if grid else []
    except ComputeMarketError as e:
        fail(e)

    view = Table(title="Expected Utility (JC, RP)")
    view.add_column("JC \\ RP", style="cyan")
    for rp in LegacyStrategy:
        view.add_column(rp.value, justify="right")
    for jc in LegacyStrategy:
        cells = [table.get(jc, rp) for rp in LegacyStrategy]
        view.add_row(jc.value, *(f"{fmt(c.u_jc)}, {fmt(c.u_rp)}" for c in cells))
    console.print(view)

    console.print(f"equilibrium: {fmt(eq.is_equilibrium)}")
    console.print(f"p bounds: {fmt(eq.p_lower)} <= p <= {fmt(eq.p_upper)} (p = {fmt(lp.p)})")
    console.print(f"best response check: {fmt(honest_is_best_response(lp))}")
    if lp.M != 3 * lp.C:
        console.print(
            f"[yellow]note:[/yellow] mediation cost M = {fmt(lp.M)} used in place of "
            f"the stated M = 3C = {fmt(3 * lp.C)}"
        )

    if rows:
        sweep_view = Table(title=f"Honest profile as {grid.partition('=')[0]} varies")
        for column in ("value", "equilibrium", "U_JC", "U_RP"):
            sweep_view.add_column(column, justify="right")
        for row in rows:
            sweep_view.add_row(
                fmt(row.value), fmt(row.is_equilibrium), fmt(row.u_jc), fmt(row.u_rp)
            )
        console.print(sweep_view)

    if out is not None:
        precision = get_settings().csv_precision
        written = [
            write_csv(
                out / LEGACY_FILE,
                ("jc", "rp", "u_jc", "u_rp"),
                _table_rows(lp),
                precision,
            )
        ]
        if rows:
            written.append(
                write_csv(
                    out / LEGACY_SWEEP_FILE,
                    ("value", "equilibrium", "u_jc", "u_rp"),
                    [(r.value, r.is_equilibrium, r.u_jc, r.u_rp) for r in rows],
                    precision,
                )
            )
        for path in written:
            console.print(f"[green]Wrote[/green] {path}")


def _parse_vary(text: str) -> tuple[str, list[float]]:
    name, _, values = text.partition("=")
    try:
        parsed = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigInvalid("--grid", [f"values must be numbers: {values!r}"]) from e
    if not name.strip() or not parsed:
        raise ConfigInvalid("--grid", [f"expected field=v1,v2,... but got {text!r}"])
    return name.strip(), parsed


def _table_rows(lp: LegacyParams) -> list[tuple[str, str, float, float]]:
    table = legacy_utilities(lp)
    return [
        (jc.value, rp.value, table.get(jc, rp).u_jc, table.get(jc, rp).u_rp)
        for jc in LegacyStrategy
        for rp in LegacyStrategy
    ]
