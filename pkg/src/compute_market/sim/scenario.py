"""Scenario and parameter files.

A scenario file describes one market: platform constants, the agent
populations and how many jobs to run. Parameter files hold a ``game:`` or
``legacy:`` section for the analysis commands. Every file may carry a
``meta:`` section with a description and tags. Top-level keys starting with
``x-`` are ignored; they hold YAML anchors shared by several agents.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Annotated, Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from compute_market.agents.behaviour import JcStrategy, PrivateCosts, RpStrategy
from compute_market.exceptions import ConfigInvalid
from compute_market.game.params import GameParams, LegacyParams
from compute_market.ledger.types import PlatformParams, ResourceVector
from compute_market.matching.solver import SolverMode

logger = logging.getLogger(__name__)

NonNegInt = Annotated[int, Field(ge=0)]


class _Strict(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class Meta(_Strict):
    name: str = ""
    description: str = ""
    tags: list[str] = Field(default_factory=list)


class JobTemplate(_Strict):
    """The job every round of a JC posts."""

    limits: ResourceVector
    instruction_max_price: Annotated[int, Field(gt=0)] = 1
    bandwidth_max_price: Annotated[int, Field(gt=0)] = 1
    deadline_ms: Annotated[int, Field(gt=0)] = 600_000
    directory: str = "dir-0"
    arch: str = "amd64"
    deposit: NonNegInt | None = None
    match_incentive: NonNegInt = 0


class JobCreatorConfig(_Strict):
    id: str
    balance: NonNegInt
    trusted_mediators: list[str]
    trusted_directories: list[str] = Field(default_factory=lambda: ["dir-0"])
    arch: str = "amd64"
    strategy: JcStrategy = JcStrategy()
    costs: PrivateCosts = PrivateCosts()
    job: JobTemplate


class ResourceProviderConfig(_Strict):
    id: str
    balance: NonNegInt
    trusted_mediators: list[str]
    trusted_directories: list[str] = Field(default_factory=lambda: ["dir-0"])
    arch: str = "amd64"
    time_per_instruction_us: NonNegInt = 1
    capacities: ResourceVector
    instruction_price: Annotated[int, Field(gt=0)] = 1
    bandwidth_price: Annotated[int, Field(gt=0)] = 1
    deposit: NonNegInt | None = None
    strategy: RpStrategy = RpStrategy()
    costs: PrivateCosts = PrivateCosts()


class MediatorConfig(_Strict):
    id: str
    balance: NonNegInt = 0
    arch: str = "amd64"
    trusted_directories: list[str] = Field(default_factory=lambda: ["dir-0"])
    p_unresponsive: Annotated[float, Field(ge=0.0, le=1.0)] = 0.0


class ScenarioConfig(_Strict):
    meta: Meta = Meta()
    seed: int = 0
    block_interval_ms: Annotated[int, Field(gt=0)] = 10_000
    job_count: NonNegInt = 10
    match_patience_blocks: Annotated[int, Field(gt=0)] = 5
    solver_mode: SolverMode = SolverMode.GREEDY
    solver_id: str = "solver-0"
    platform: PlatformParams = PlatformParams()
    job_creators: list[JobCreatorConfig]
    resource_providers: list[ResourceProviderConfig]
    mediators: list[MediatorConfig]

    @model_validator(mode="after")
    def validate_ids(self) -> ScenarioConfig:
        ids = [
            self.solver_id,
            *(a.id for a in self.job_creators),
            *(a.id for a in self.resource_providers),
            *(a.id for a in self.mediators),
        ]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"duplicate account ids: {', '.join(duplicates)}")
        return self


def _format_errors(exc: ValidationError) -> list[str]:
    return [
        f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in exc.errors()
    ]


def read_yaml(path: Path) -> dict[str, Any]:
    try:
        content = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigInvalid(str(path), [f"cannot read file: {e}"]) from e
    except yaml.YAMLError as e:
        raise ConfigInvalid(str(path), [f"invalid YAML: {e}"]) from e
    if not isinstance(content, dict):
        raise ConfigInvalid(str(path), ["file is empty or not a mapping"])
    return content


def parse_scenario(data: dict[str, Any], source: str = "<scenario>") -> ScenarioConfig:
    data = {k: v for k, v in data.items() if not str(k).startswith("x-")}
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigInvalid(source, _format_errors(e)) from e


def load_scenario(path: Path) -> ScenarioConfig:
    config = parse_scenario(read_yaml(path), str(path))
    logger.debug("loaded scenario %s (%d jobs per JC)", path, config.job_count)
    return config


def scenario_to_yaml(config: ScenarioConfig) -> str:
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=True)


def dump_scenario(config: ScenarioConfig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(scenario_to_yaml(config), encoding="utf-8")
    return path


def _section(path: Path, key: str) -> tuple[dict[str, Any], str]:
    content = read_yaml(path)
    unknown = sorted(set(content) - {"meta", key})
    if unknown:
        raise ConfigInvalid(str(path), [f"unexpected top-level keys: {', '.join(unknown)}"])
    section = content.get(key)
    if not isinstance(section, dict):
        raise ConfigInvalid(str(path), [f"missing '{key}' section"])
    return section, str(path)


def load_game_params(path: Path) -> GameParams:
    """Read the ``game:`` section of a parameter file."""
    section, source = _section(path, "game")
    try:
        return GameParams.model_validate(section)
    except ValidationError as e:
        raise ConfigInvalid(source, _format_errors(e)) from e


def load_legacy_params(path: Path) -> LegacyParams:
    """Read the ``legacy:`` section of a parameter file."""
    section, source = _section(path, "legacy")
    try:
        return LegacyParams.model_validate(section)
    except ValidationError as e:
        raise ConfigInvalid(source, _format_errors(e)) from e
