"""Scenario builders shared by the simulation tests."""

from __future__ import annotations

from typing import Any

from compute_market.sim.registry import ScenarioRegistry
from compute_market.sim.scenario import ScenarioConfig, load_scenario, parse_scenario


def library_scenario(name: str) -> ScenarioConfig:
    return load_scenario(ScenarioRegistry().resolve(name))


def edit_scenario(config: ScenarioConfig, **top_level: Any) -> ScenarioConfig:
    """Copy of ``config`` with top-level keys replaced, re-validated."""
    data = config.model_dump(mode="json")
    data.update(top_level)
    return parse_scenario(data)


def single_pair(config: ScenarioConfig, **top_level: Any) -> ScenarioConfig:
    """Keep only the first JC and RP, with every agent responsive."""
    data = config.model_dump(mode="json")
    jc = data["job_creators"][0]
    rp = data["resource_providers"][0]
    rp["strategy"]["p_unresponsive"] = 0.0
    for mediator in data["mediators"]:
        mediator["p_unresponsive"] = 0.0
    data["job_creators"] = [jc]
    data["resource_providers"] = [rp]
    data.update(top_level)
    return parse_scenario(data)
