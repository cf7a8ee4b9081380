"""Console helpers shared by the compute-market commands."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import NoReturn

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from compute_market.config import get_settings
from compute_market.exceptions import ComputeMarketError
from compute_market.game.export import Cell, format_cell
from compute_market.sim.registry import ScenarioRegistry

console = Console()
err_console = Console(stderr=True, soft_wrap=True, highlight=False)

PACKAGE_LOGGER = "compute_market"


def configure_logging(level: int) -> None:
    """Send package log records to stderr through rich."""
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.handlers = [RichHandler(console=err_console, show_path=False, show_time=False)]
    logger.setLevel(level)


def fmt(value: Cell) -> str:
    """Human form of a value; floats use the display precision."""
    return format_cell(value, get_settings().display_precision)


def fail(error: ComputeMarketError) -> NoReturn:
    """Report ``error`` for people and for scripts, then exit 1."""
    console.print(f"[red]Error:[/red] {escape(str(error))}")
    message = " ".join(str(error).split())
    err_console.print(f"error={type(error).__name__} message={message}", markup=False)
    raise typer.Exit(1) from error


def resolve_input(name_or_path: str) -> Path:
    """A scenario or parameter file given by path or by registry name."""
    settings = get_settings()
    settings.require_scenario_dirs_exist()
    return ScenarioRegistry(settings.scenario_directories).resolve(name_or_path)
