"""Deterministic market simulation, scenario files and parameter sweeps."""

from compute_market.sim.registry import ScenarioRegistry
from compute_market.sim.runner import SimulationResult, run_scenario
from compute_market.sim.scenario import ScenarioConfig, load_scenario
from compute_market.sim.sweep import parse_grid, sweep

__all__ = [
    "ScenarioConfig",
    "ScenarioRegistry",
    "SimulationResult",
    "load_scenario",
    "parse_grid",
    "run_scenario",
    "sweep",
]
