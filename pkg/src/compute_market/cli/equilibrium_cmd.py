"""compute-market equilibrium: Mixed-strategy equilibrium and the JC's optimal p_a."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Annotated, TypeVar

import typer

from compute_market.cli.output import console, fail, fmt, resolve_input
from compute_market.config import get_settings
from compute_market.exceptions import AnalysisError, ComputeMarketError
from compute_market.game.equilibrium import (
    equilibrium_pe,
    equilibrium_pv,
    jc_total_utility,
    min_optimal_pa,
    optimal_pa,
)
from compute_market.game.export import format_cell
from compute_market.sim.scenario import load_game_params

EQUILIBRIUM_FILE = "equilibrium.txt"


def equilibrium(
    config: Annotated[
        str, typer.Option("--config", "-c", help="Parameter file path or library name")
    ],
    out: Annotated[
        Path | None, typer.Option("--out", "-o", help="Directory for equilibrium.txt")
    ] = None,
) -> None:
    """Print p_v, p_e and the p_a the JC should tolerate."""
    try:
        params = load_game_params(resolve_input(config))
    except ComputeMarketError as e:
        fail(e)

    values: dict[str, float | bool | str] = {}
    pv = _attempt(lambda: equilibrium_pv(params))
    if pv is not None:
        values["p_v"] = pv.value
        values["p_v_valid"] = pv.valid
    pe = _attempt(lambda: equilibrium_pe(params))
    if pe is not None:
        values["p_e"] = pe.value
        values["p_e_valid"] = pe.valid
    values["jc_utility"] = jc_total_utility(params)
    best = _attempt(lambda: optimal_pa(params))
    if best is not None:
        values["optimal_p_a"] = best
    floor = _attempt(lambda: min_optimal_pa(params.n, params.theta))
    if floor is not None:
        values["min_optimal_p_a"] = floor

    for key, value in values.items():
        console.print(f"{key}={fmt(value)}")

    if out is not None:
        precision = get_settings().csv_precision
        out.mkdir(parents=True, exist_ok=True)
        path = out / EQUILIBRIUM_FILE
        text = "".join(f"{k}={format_cell(v, precision)}\n" for k, v in values.items())
        path.write_text(text, encoding="utf-8")
        console.print(f"[green]Wrote[/green] {path}")


T = TypeVar("T")


def _attempt(compute: Callable[[], T]) -> T | None:
    try:
        return compute()
    except AnalysisError as e:
        console.print(f"[yellow]Undefined:[/yellow] {e}")
        return None
