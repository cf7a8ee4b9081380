"""Tests for compute_market.sim.runner: end-to-end market runs."""

from __future__ import annotations

import math

import pytest

from compute_market.agents.jobs import JobSpec
from compute_market.game.outcomes import GameParty, Outcome, payoff_row
from compute_market.ledger.events import events_to_csv
from compute_market.ledger.types import (
    CONTRACT_SINK_ID,
    EventKind,
    JobFsmState,
    Party,
    ResourceVector,
)
from compute_market.sim.runner import JobTrack, classify, run_scenario, scenario_game_params
from tests.test_sim.helpers import edit_scenario, library_scenario, single_pair


def _kinds(result) -> set[EventKind]:
    return {e.kind for e in result.events}


class TestHonestRun:
    @pytest.fixture
    def result(self):
        return run_scenario(library_scenario("honest"))

    def test_every_job_accepted_without_mediation(self, result):
        m = result.metrics
        assert m.jobs_posted == 10
        assert m.matches == 10
        assert m.jobs_closed == 10
        assert m.outcomes[Outcome.O4] == 10
        assert sum(m.outcomes.values()) == 10
        assert m.mediations == 0
        assert m.verifications == 0
        assert not m.aborted_rounds

    def test_conservation(self, result):
        assert result.metrics.conservation_residual == 0
        assert result.ledger.conservation_residual() == 0

    def test_agent_totals(self, result):
        agents = result.metrics.agents
        # π_c = 10 and π_a = 1 per job; b = 15, c_e = 5.
        assert agents["jc-0"].ledger_delta == -110
        assert agents["rp-0"].ledger_delta == 90
        assert agents["med-0"].ledger_delta == 20
        assert agents["jc-0"].realized_utility == pytest.approx(40.0)
        assert agents["rp-0"].realized_utility == pytest.approx(40.0)

    def test_every_match_closed_by_jc(self, result):
        closes = [e for e in result.events if e.kind == EventKind.MATCH_CLOSED]
        assert len(closes) == 10
        assert {e.get("accepted_by") for e in closes} == {"jc-0"}

    def test_predictions_attached(self, result):
        assert result.game_params is not None
        assert result.metrics.predicted_outcomes[Outcome.O4] == pytest.approx(1.0)

    def test_zero_jobs(self):
        result = run_scenario(edit_scenario(library_scenario("honest"), job_count=0))
        assert result.metrics.jobs_posted == 0
        assert result.metrics.blocks == 0
        assert result.metrics.conservation_residual == 0


class TestRejectedCallRecovery:
    """A result landing after the completion deadline falls back to the JC's timeout."""

    @pytest.fixture(scope="class")
    def result(self):
        config = library_scenario("honest")
        data = config.model_dump(mode="json")
        # Matched at 20 s, the result lands at 30 s.
        data["job_creators"][0]["job"]["deadline_ms"] = 25_000
        return run_scenario(edit_scenario(config, job_count=2, job_creators=data["job_creators"]))

    def test_late_result_times_out(self, result):
        m = result.metrics
        assert m.matches == 2
        assert m.aborted_rounds["PastDeadline"] == 2
        assert m.jobs_timed_out == 2
        assert m.jobs_closed == 0
        assert EventKind.RESULT_POSTED not in _kinds(result)
        assert len([e for e in result.events if e.kind == EventKind.JOB_TIMED_OUT]) == 2

    def test_no_match_left_open(self, result):
        ledger = result.ledger
        for event in result.events:
            if event.kind != EventKind.MATCHED:
                continue
            assert ledger.job_state(event.subject_id) == JobFsmState.TIMED_OUT
            assert ledger.escrow_of(event.get("job_offer")) == 0
            assert ledger.escrow_of(event.get("resource_offer")) == 0

    def test_conservation(self, result):
        assert result.metrics.conservation_residual == 0

    def test_undelivered_work_is_not_a_benefit(self, result):
        assert result.metrics.agents["jc-0"].private_benefit == 0


class TestDeterminism:
    def test_same_seed_same_bytes(self):
        config = library_scenario("protocol-tour")
        first, second = run_scenario(config), run_scenario(config)
        assert events_to_csv(first.events) == events_to_csv(second.events)
        assert first.metrics.to_text() == second.metrics.to_text()

    def test_seed_override(self):
        config = library_scenario("protocol-tour")
        a = run_scenario(config, seed=1)
        b = run_scenario(edit_scenario(config, seed=1))
        c = run_scenario(config, seed=2)
        assert events_to_csv(a.events) == events_to_csv(b.events)
        assert events_to_csv(a.events) != events_to_csv(c.events)


class TestProtocolTour:
    @pytest.fixture(scope="class")
    def result(self):
        return run_scenario(library_scenario("protocol-tour"))

    def test_every_event_kind(self, result):
        assert _kinds(result) == set(EventKind)

    def test_both_fault_verdicts(self, result):
        faulted = {
            e.get("faulty_party")
            for e in result.events
            if e.kind == EventKind.MEDIATION_RESULT_POSTED
        }
        assert faulted == {Party.JOB_CREATOR.value, Party.RESOURCE_PROVIDER.value}

    def test_rp_accepts_after_ignored_result(self, result):
        closers = {
            e.get("accepted_by")
            for e in result.events
            if e.kind == EventKind.MATCH_CLOSED and e.get("outcome") == "accepted"
        }
        assert closers == {"jc-0", "rp-0"}

    def test_mediation_timeout_pays_half_the_estimate(self, result):
        timeouts = [e for e in result.events if e.kind == EventKind.MEDIATION_TIMED_OUT]
        assert timeouts
        assert {e.get("compensation") for e in timeouts} == {"5"}

    def test_stranded_offers_canceled(self, result):
        m = result.metrics
        assert m.jobs_unmatched == 80
        assert m.agents["jc-stranded"].ledger_delta == -80  # g_j per posted offer
        assert m.agents["rp-idle"].ledger_delta == -1  # g_r of its one offer

    def test_conservation(self, result):
        m = result.metrics
        assert m.conservation_residual == 0
        total_delta = sum(t.ledger_delta for t in m.agents.values())
        assert total_delta + result.ledger.balance(CONTRACT_SINK_ID) == 0

    def test_bookkeeping(self, result):
        m = result.metrics
        assert m.jobs_posted == 160
        assert m.matches == m.jobs_closed + m.jobs_timed_out
        assert m.jobs_closed == sum(m.outcomes.values()) + m.unclassified
        assert m.unclassified == 0
        assert not m.aborted_rounds


class TestRewardIdentity:
    """Without timeouts, every closed job is one game leaf, so totals are exact sums."""

    @pytest.fixture(scope="class")
    def run(self):
        config = single_pair(library_scenario("protocol-tour"), job_count=150)
        return config, run_scenario(config)

    def test_all_jobs_classified(self, run):
        _, result = run
        m = result.metrics
        assert m.jobs_closed == 150
        assert sum(m.outcomes.values()) == 150
        assert m.jobs_timed_out == 0

    @pytest.mark.parametrize(("agent", "party"), [("jc-0", GameParty.JC), ("rp-0", GameParty.RP)])
    def test_ledger_delta_is_contract_payoff(self, run, agent, party):
        config, result = run
        params = scenario_game_params(config)
        m = result.metrics
        expected = sum(
            count * payoff_row(o, party, params).contract_payoff for o, count in m.outcomes.items()
        )
        assert m.agents[agent].ledger_delta == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize(("agent", "party"), [("jc-0", GameParty.JC), ("rp-0", GameParty.RP)])
    def test_realized_utility_is_reward(self, run, agent, party):
        config, result = run
        params = scenario_game_params(config)
        m = result.metrics
        expected = sum(
            count * payoff_row(o, party, params).reward for o, count in m.outcomes.items()
        )
        assert m.agents[agent].realized_utility == pytest.approx(expected, abs=1e-6)


class TestOutcomeFrequencies:
    def test_match_branch_products(self):
        config = single_pair(library_scenario("protocol-tour"), job_count=3000)
        data = config.model_dump(mode="json")
        data["job_creators"][0]["strategy"]["p_ignore"] = 0.0
        config = edit_scenario(config, job_creators=data["job_creators"])
        result = run_scenario(config)
        m = result.metrics
        total = sum(m.outcomes.values())
        assert total == 3000
        for outcome, p in m.predicted_outcomes.items():
            band = 4 * math.sqrt(p * (1 - p) / total) + 1e-12
            assert abs(m.outcomes[outcome] / total - p) <= band, outcome


class TestScenarioGameParams:
    def test_honest_scenario(self):
        params = scenario_game_params(library_scenario("honest"))
        assert params.pi_c == 10
        assert params.pi_c_hat == 10
        assert params.stake == 10 * 52
        assert params.mediation_fee == 20
        assert params.follows_convention
        assert (params.p_a, params.p_e, params.p_v) == (1.0, 1.0, 0.0)

    def test_penalty_convention(self):
        config = library_scenario("honest")
        data = config.model_dump(mode="json")
        data["platform"]["pi_d_convention"] = "penalty"
        params = scenario_game_params(edit_scenario(config, platform=data["platform"]))
        assert params.pi_d == 10 * 50


class TestClassify:
    def test_unfinished_track_is_unclassified(self):
        profile = ResourceVector(instruction_count=1, bandwidth=1)
        spec = JobSpec(job_id="j", resource_profile=profile)
        assert classify(JobTrack(job_id="j", jc_id="jc-0", spec=spec, posted_block=0)) is None


@pytest.mark.slow
class TestCheatingJobCreator:
    """100 000 jobs, JC verifying at the calibration equilibrium rate."""

    @pytest.fixture(scope="class")
    def result(self):
        return run_scenario(library_scenario("cheating-jc"))

    def test_mediation_rate(self, result):
        m = result.metrics
        assert m.matches == 100_000
        p = 0.0194 * (1 - 0.99)
        expected = m.matches * p
        band = 3 * math.sqrt(m.matches * p * (1 - p))
        assert abs(m.mediations - expected) <= band

    def test_conservation(self, result):
        assert result.metrics.conservation_residual == 0

    def test_replay_is_byte_identical(self, result):
        again = run_scenario(library_scenario("cheating-jc"))
        assert events_to_csv(again.events) == events_to_csv(result.events)
        assert again.metrics.to_text() == result.metrics.to_text()
