"""CSV emitters for analysis tables, sweep grids and the derivative curve."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from pathlib import Path

from compute_market.game.equilibrium import CurvePoint
from compute_market.game.utilities import UtilityTable

Cell = str | int | float | bool


def format_float(value: float, precision: int = 17) -> str:
    """Shortest round-tripping text at full precision, else ``precision`` significant digits."""
    if precision >= 17:
        return repr(float(value))
    return f"{value:.{precision}g}"


def format_cell(value: Cell, precision: int = 17) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value, precision)
    return str(value)


def rows_to_csv(
    header: Sequence[str], rows: Iterable[Sequence[Cell]], precision: int = 17
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v, precision) for v in row])
    return buffer.getvalue()


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Cell]], precision: int = 17
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_csv(header, rows, precision), encoding="utf-8")
    return path


def utility_rows(rp: UtilityTable, jc: UtilityTable) -> list[tuple[str, str, float]]:
    """``party,profile,value`` rows for both tables."""
    rows: list[tuple[str, str, float]] = []
    for party, table in (("RP", rp), ("JC", jc)):
        rows.extend((party, profile, value) for profile, value in table.as_dict().items())
    return rows


def curve_rows(points: Iterable[CurvePoint]) -> list[tuple[int, float, float]]:
    return [(p.n, p.p_a, p.derivative) for p in points]


CURVE_HEADER = ("n", "p_a", "dU_dpa")
UTILITY_HEADER = ("party", "profile", "value")
