"""Parameter sweeps over a scenario template.

A grid is a list of ``field=v1,v2,...`` dimensions. Points are visited in
row-major order (the last dimension varies fastest), and each row pairs the
simulated metrics with the closed-form predictions for the same parameters.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from compute_market.exceptions import AnalysisError, ConfigInvalid, UnknownGridField
from compute_market.game.equilibrium import equilibrium_pv, min_optimal_pa
from compute_market.game.export import Cell, write_csv
from compute_market.game.outcomes import Outcome, outcome_probabilities
from compute_market.sim.runner import run_scenario, scenario_game_params
from compute_market.sim.scenario import ScenarioConfig, parse_scenario

logger = logging.getLogger(__name__)

PLATFORM_FIELDS = frozenset(
    {
        "theta",
        "n",
        "g_j",
        "g_r",
        "g_m",
        "pi_a",
        "reaction_deadline_ms",
        "mediation_deadline_ms",
        "pi_d_convention",
    }
)
JC_STRATEGY_FIELDS = frozenset({"p_a", "p_v", "p_ignore", "detection_probability"})
JC_COST_FIELDS = frozenset({"b", "c_v"})
RP_STRATEGY_FIELDS = frozenset({"p_e", "p_unresponsive"})
RP_COST_FIELDS = frozenset({"c_e", "c_d"})
TOP_LEVEL_FIELDS = frozenset(
    {"seed", "job_count", "block_interval_ms", "match_patience_blocks", "solver_mode"}
)
GRID_FIELDS = (
    PLATFORM_FIELDS
    | JC_STRATEGY_FIELDS
    | JC_COST_FIELDS
    | RP_STRATEGY_FIELDS
    | RP_COST_FIELDS
    | TOP_LEVEL_FIELDS
)

METRIC_COLUMNS = (
    "jobs_posted",
    "matches",
    "mediations",
    "mediation_rate",
    "verification_rate",
    "unclassified",
    "aborted",
    "conservation_residual",
    *(f"outcome_{o.value}" for o in Outcome),
)
PREDICTION_COLUMNS = ("predicted_mediation_rate", "equilibrium_pv", "min_optimal_pa")

Dimension = tuple[str, list[Any]]


def parse_dimension(text: str) -> Dimension:
    """Parse one ``field=v1,v2,...`` grid dimension.

    Values are read as YAML scalars, so ``2`` is an int, ``0.5`` a float
    and ``maximum`` a string.
    """
    name, sep, values = text.partition("=")
    name = name.strip()
    if not sep or not name:
        raise ConfigInvalid("--grid", [f"expected field=v1,v2,... but got {text!r}"])
    if name not in GRID_FIELDS:
        raise UnknownGridField(name)
    parsed = [yaml.safe_load(v.strip()) for v in values.split(",") if v.strip()]
    if not parsed:
        raise ConfigInvalid("--grid", [f"no values given for {name}"])
    return name, parsed


def parse_grid(items: Sequence[str]) -> list[Dimension]:
    dims = [parse_dimension(item) for item in items]
    names = [name for name, _ in dims]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigInvalid("--grid", [f"field given twice: {', '.join(duplicates)}"])
    return dims


def grid_points(dims: Sequence[Dimension]) -> list[dict[str, Any]]:
    """Every grid point in row-major order. An empty grid has no points."""
    if not dims:
        return []
    names = [name for name, _ in dims]
    combos = itertools.product(*(values for _, values in dims))
    return [dict(zip(names, combo, strict=True)) for combo in combos]


def apply_point(config: ScenarioConfig, point: dict[str, Any]) -> ScenarioConfig:
    """Copy of ``config`` with the grid point's values written in and re-validated.

    Agent fields are applied to every JC or RP of the scenario.
    """
    data = config.model_dump(mode="json")
    for name, value in point.items():
        if name in PLATFORM_FIELDS:
            data["platform"][name] = value
        elif name in TOP_LEVEL_FIELDS:
            data[name] = value
        elif name in JC_STRATEGY_FIELDS:
            for jc in data["job_creators"]:
                jc["strategy"][name] = value
        elif name in JC_COST_FIELDS:
            for jc in data["job_creators"]:
                jc["costs"][name] = value
        elif name in RP_STRATEGY_FIELDS:
            for rp in data["resource_providers"]:
                rp["strategy"][name] = value
        elif name in RP_COST_FIELDS:
            for rp in data["resource_providers"]:
                rp["costs"][name] = value
        else:
            raise UnknownGridField(name)
    return parse_scenario(data, source=f"grid point {point}")


@dataclass(frozen=True)
class SweepRow:
    point: dict[str, Any]
    metrics: dict[str, Cell]
    predictions: dict[str, Cell]

    def cells(self, fields: Sequence[str]) -> list[Cell]:
        return [
            *(self.point[f] for f in fields),
            *(self.metrics[c] for c in METRIC_COLUMNS),
            *(self.predictions[c] for c in PREDICTION_COLUMNS),
        ]


def predictions_for(config: ScenarioConfig) -> dict[str, Cell]:
    """Closed-form values for a scenario. Undefined quantities are left blank."""
    out: dict[str, Cell] = dict.fromkeys(PREDICTION_COLUMNS, "")
    if not config.job_creators or not config.resource_providers:
        return out
    params = scenario_game_params(config)
    probs = outcome_probabilities(params)
    out["predicted_mediation_rate"] = sum(p for o, p in probs.items() if o.mediated)
    try:
        out["equilibrium_pv"] = equilibrium_pv(params).value
    except AnalysisError as e:
        logger.debug("no p_v prediction: %s", e)
    try:
        out["min_optimal_pa"] = min_optimal_pa(params.n, params.theta)
    except AnalysisError as e:
        logger.debug("no optimal p_a prediction: %s", e)
    return out


def run_point(config: ScenarioConfig, point: dict[str, Any]) -> SweepRow:
    scenario = apply_point(config, point)
    m = run_scenario(scenario).metrics
    metrics: dict[str, Cell] = {
        "jobs_posted": m.jobs_posted,
        "matches": m.matches,
        "mediations": m.mediations,
        "mediation_rate": m.mediation_rate,
        "verification_rate": m.verification_rate,
        "unclassified": m.unclassified,
        "aborted": sum(m.aborted_rounds.values()),
        "conservation_residual": m.conservation_residual,
    }
    for outcome in Outcome:
        metrics[f"outcome_{outcome.value}"] = m.outcomes[outcome]
    logger.info("sweep point %s: %d matches", point, m.matches)
    return SweepRow(point, metrics, predictions_for(scenario))


def _run_point_args(args: tuple[ScenarioConfig, dict[str, Any]]) -> SweepRow:
    return run_point(*args)


def sweep(
    config: ScenarioConfig, dims: Sequence[Dimension], workers: int = 1
) -> tuple[list[str], list[SweepRow]]:
    """Run every grid point. Rows come back in grid order whatever ``workers`` is."""
    fields = [name for name, _ in dims]
    header = [*fields, *METRIC_COLUMNS, *PREDICTION_COLUMNS]
    points = grid_points(dims)
    # Validate every point before spending time on any run.
    for point in points:
        apply_point(config, point)

    jobs = [(config, point) for point in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_point_args, jobs))
    else:
        rows = [_run_point_args(job) for job in jobs]
    return header, rows


def write_sweep_csv(
    path: Path, header: Sequence[str], rows: Sequence[SweepRow], precision: int = 17
) -> Path:
    fields = header[: len(header) - len(METRIC_COLUMNS) - len(PREDICTION_COLUMNS)]
    return write_csv(path, header, (row.cells(fields) for row in rows), precision)
