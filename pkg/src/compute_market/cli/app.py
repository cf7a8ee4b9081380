"""Main CLI application for compute-market."""

from __future__ import annotations

import logging

import typer
from pydantic import ValidationError

from compute_market import __version__
from compute_market.cli.output import configure_logging, fail
from compute_market.config import SETTINGS_FILE, get_settings
from compute_market.exceptions import ConfigInvalid

app = typer.Typer(
    name="compute-market",
    help="Simulate and analyze an incentive-compatible computation marketplace.",
    no_args_is_help=True,
    rich_markup_mode="rich",
)


def version_callback(value: bool) -> None:
    if value:
        typer.echo(f"compute-market {__version__}")
        raise typer.Exit()


@app.callback()
def main_callback(
    version: bool = typer.Option(
        False, "--version", "-v", help="Show version.", callback=version_callback, is_eager=True
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Log debug output to stderr."),
) -> None:
    """compute-market: outsourced computation market simulator and game analysis."""
    try:
        settings = get_settings()
    except ValidationError as e:
        fail(ConfigInvalid(SETTINGS_FILE, [err["msg"] for err in e.errors()]))
    configure_logging(logging.DEBUG if verbose else settings.log_level_number)


# Import and register commands
from compute_market.cli.analyze_cmd import analyze  # noqa: E402
from compute_market.cli.curve_cmd import dump_derivative_curve  # noqa: E402
from compute_market.cli.equilibrium_cmd import equilibrium  # noqa: E402
from compute_market.cli.legacy_cmd import legacy_ne  # noqa: E402
from compute_market.cli.list_cmd import list_scenarios  # noqa: E402
from compute_market.cli.simulate_cmd import simulate  # noqa: E402
from compute_market.cli.sweep_cmd import sweep  # noqa: E402

app.command("simulate")(simulate)
app.command("analyze")(analyze)
app.command("equilibrium")(equilibrium)
app.command("sweep")(sweep)
app.command("legacy-ne")(legacy_ne)
app.command("dump-derivative-curve")(dump_derivative_curve)
app.command("list-scenarios")(list_scenarios)


def main() -> None:
    """Entry point for the CLI."""
    try:
        app()
    except SystemExit as e:
        # click exits 2 on usage errors; the CLI only reports 0 or 1.
        if e.code == 2:
            raise SystemExit(1) from None
        raise
