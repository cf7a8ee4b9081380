"""Tests for compute_market.sim.metrics."""

from __future__ import annotations

from compute_market.game.outcomes import Outcome
from compute_market.sim.metrics import AgentTotals, Metrics


class TestMetrics:
    def test_rates_with_no_activity(self):
        m = Metrics()
        assert m.mediation_rate == 0.0
        assert m.verification_rate == 0.0
        assert m.outcome_frequency(Outcome.O5) == 0.0

    def test_rates(self):
        m = Metrics(matches=200, mediations=3, results_reacted=100, verifications=40)
        assert m.mediation_rate == 0.015
        assert m.verification_rate == 0.4

    def test_outcome_frequency(self):
        m = Metrics()
        m.outcomes[Outcome.O4] = 3
        m.outcomes[Outcome.O5] = 1
        assert m.outcome_frequency(Outcome.O4) == 0.75

    def test_realized_utility(self):
        totals = AgentTotals(ledger_delta=-110, private_cost=20.0, private_benefit=150.0)
        assert totals.realized_utility == 20.0

    def test_mean_utility(self):
        m = Metrics(matches=4)
        m.agents["jc-0"] = AgentTotals(ledger_delta=8)
        assert m.mean_utility("jc-0") == 2.0
        assert m.mean_utility("jc-0", rounds=2) == 4.0


class TestToText:
    def _metrics(self) -> Metrics:
        m = Metrics(jobs_posted=2, matches=2, jobs_closed=2, mediations=1)
        m.outcomes[Outcome.O5] = 1
        m.outcomes[Outcome.O6] = 1
        m.aborted_rounds["StaleOffer"] = 1
        m.predicted_outcomes = {o: 1 / 7 for o in Outcome}
        m.agents["rp-0"] = AgentTotals(ledger_delta=5, private_cost=1.5)
        m.agents["jc-0"] = AgentTotals(ledger_delta=-5, private_benefit=4.0)
        return m

    def test_key_value_lines(self):
        lines = self._metrics().to_text().splitlines()
        assert all("=" in line for line in lines)
        values = dict(line.split("=", 1) for line in lines)
        assert values["mediation_rate"] == "0.5"
        assert values["outcome.o6"] == "1"
        assert values["outcome.o1"] == "0"
        assert values["aborted.StaleOffer"] == "1"
        assert values["agent.jc-0.realized_utility"] == "-1.0"
        assert values["predicted.o1"] == repr(1 / 7)

    def test_agents_sorted(self):
        lines = self._metrics().to_text().splitlines()
        agent_lines = [line for line in lines if line.startswith("agent.")]
        assert agent_lines[0].startswith("agent.jc-0.")
        assert agent_lines[-1].startswith("agent.rp-0.")

    def test_precision(self):
        text = self._metrics().to_text(precision=3)
        assert "predicted.o1=0.143\n" in text
