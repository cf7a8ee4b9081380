"""Tests for compute_market.sim.scenario: scenario and parameter files."""

from __future__ import annotations

from pathlib import Path

import pytest

from compute_market.exceptions import ConfigInvalid
from compute_market.matching.solver import SolverMode
from compute_market.sim.registry import LIBRARY_DIR
from compute_market.sim.scenario import (
    dump_scenario,
    load_game_params,
    load_legacy_params,
    load_scenario,
    parse_scenario,
    read_yaml,
    scenario_to_yaml,
)
from tests.test_sim.helpers import library_scenario

SCENARIOS = ["honest", "cheating-jc", "protocol-tour", "worst-case-grid"]


def _minimal() -> dict:
    return {
        "job_creators": [
            {
                "id": "jc-0",
                "balance": 1000,
                "trusted_mediators": ["med-0"],
                "job": {"limits": {"instruction_count": 4, "bandwidth": 2}},
            }
        ],
        "resource_providers": [
            {
                "id": "rp-0",
                "balance": 1000,
                "trusted_mediators": ["med-0"],
                "capacities": {"instruction_count": 4, "bandwidth": 2},
            }
        ],
        "mediators": [{"id": "med-0"}],
    }


class TestParseScenario:
    def test_defaults(self):
        config = parse_scenario(_minimal())
        assert config.block_interval_ms == 10_000
        assert config.solver_mode == SolverMode.GREEDY
        assert config.platform.theta == 50
        assert config.job_creators[0].strategy.p_a == 1.0

    def test_unknown_top_level_key(self):
        data = {**_minimal(), "jobcount": 3}
        with pytest.raises(ConfigInvalid, match="jobcount"):
            parse_scenario(data)

    def test_unknown_nested_key(self):
        data = _minimal()
        data["platform"] = {"theta": 5, "penalty": 2}
        with pytest.raises(ConfigInvalid, match="platform.penalty"):
            parse_scenario(data)

    def test_anchor_keys_ignored(self):
        data = {**_minimal(), "x-shared": {"anything": 1}}
        assert parse_scenario(data).job_count == 10

    def test_duplicate_ids(self):
        data = _minimal()
        data["mediators"] = [{"id": "rp-0"}]
        with pytest.raises(ConfigInvalid, match="duplicate account ids: rp-0"):
            parse_scenario(data)

    def test_invalid_probability(self):
        data = _minimal()
        data["job_creators"][0]["strategy"] = {"p_v": 1.5}
        with pytest.raises(ConfigInvalid) as exc_info:
            parse_scenario(data, source="inline")
        assert exc_info.value.source == "inline"
        assert any("job_creators.0.strategy.p_v" in e for e in exc_info.value.errors)


class TestScenarioFiles:
    @pytest.mark.parametrize("name", SCENARIOS)
    def test_library_scenarios_load(self, name):
        config = library_scenario(name)
        assert config.job_creators and config.resource_providers and config.mediators

    @pytest.mark.parametrize("name", SCENARIOS)
    def test_round_trip(self, name, tmp_path):
        config = library_scenario(name)
        path = dump_scenario(config, tmp_path / "nested" / f"{name}.yml")
        assert load_scenario(path) == config
        assert scenario_to_yaml(load_scenario(path)) == scenario_to_yaml(config)

    def test_shared_agent_blocks_expand(self):
        config = library_scenario("cheating-jc")
        assert [jc.id for jc in config.job_creators] == ["jc-0", "jc-1", "jc-2", "jc-3"]
        assert {jc.strategy.p_v for jc in config.job_creators} == {0.0194}
        assert config.job_count * len(config.job_creators) == 100_000


class TestReadYaml:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigInvalid, match="cannot read file"):
            read_yaml(tmp_path / "nope.yml")

    def test_bad_yaml(self, tmp_path):
        path = tmp_path / "bad.yml"
        path.write_text("a: [1, 2\n", encoding="utf-8")
        with pytest.raises(ConfigInvalid, match="invalid YAML"):
            read_yaml(path)

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "list.yml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigInvalid, match="not a mapping"):
            read_yaml(path)


class TestParameterFiles:
    def test_game_section(self):
        params = load_game_params(LIBRARY_DIR / "calibration.yml")
        assert params.p_a == 0.99
        assert params.c_e == params.pi_c
        assert not params.enforce_constraints

    def test_legacy_section(self):
        lp = load_legacy_params(LIBRARY_DIR / "legacy-example.yml")
        assert lp.M == 0.0
        assert lp.f == 150.0

    def test_missing_section(self, tmp_path: Path):
        path = tmp_path / "p.yml"
        path.write_text("meta: {description: x}\n", encoding="utf-8")
        with pytest.raises(ConfigInvalid, match="missing 'game' section"):
            load_game_params(path)

    def test_unexpected_key(self, tmp_path: Path):
        path = tmp_path / "p.yml"
        path.write_text("game: {n: 2}\nlegacy: {p: 0.1}\n", encoding="utf-8")
        with pytest.raises(ConfigInvalid, match="unexpected top-level keys: legacy"):
            load_game_params(path)

    def test_schema_error(self, tmp_path: Path):
        path = tmp_path / "p.yml"
        path.write_text("legacy: {p: 3}\n", encoding="utf-8")
        with pytest.raises(ConfigInvalid, match="p"):
            load_legacy_params(path)
