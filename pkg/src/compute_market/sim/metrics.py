"""Run statistics and their key=value text form."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from compute_market.game.export import format_float
from compute_market.game.outcomes import Outcome


@dataclass
class AgentTotals:
    ledger_delta: int = 0
    private_cost: float = 0.0
    private_benefit: float = 0.0

    @property
    def realized_utility(self) -> float:
        return self.ledger_delta + self.private_benefit - self.private_cost


@dataclass
class Metrics:
    jobs_posted: int = 0
    matches: int = 0
    jobs_closed: int = 0
    jobs_timed_out: int = 0
    jobs_unmatched: int = 0
    results_reacted: int = 0
    verifications: int = 0
    mediations: int = 0
    unclassified: int = 0
    blocks: int = 0
    conservation_residual: int = 0
    outcomes: Counter[Outcome] = field(default_factory=Counter)
    aborted_rounds: Counter[str] = field(default_factory=Counter)
    agents: dict[str, AgentTotals] = field(default_factory=dict)
    predicted_outcomes: dict[Outcome, float] = field(default_factory=dict)

    @property
    def mediation_rate(self) -> float:
        return self.mediations / self.matches if self.matches else 0.0

    @property
    def verification_rate(self) -> float:
        return self.verifications / self.results_reacted if self.results_reacted else 0.0

    def outcome_frequency(self, outcome: Outcome) -> float:
        classified = sum(self.outcomes.values())
        return self.outcomes[outcome] / classified if classified else 0.0

    def mean_utility(self, agent_id: str, rounds: int | None = None) -> float:
        per = rounds if rounds is not None else self.matches
        return self.agents[agent_id].realized_utility / per if per else 0.0

    def to_text(self, precision: int = 17) -> str:
        """One ``key=value`` per line in a fixed order."""
        lines = [
            f"jobs_posted={self.jobs_posted}",
            f"matches={self.matches}",
            f"jobs_closed={self.jobs_closed}",
            f"jobs_timed_out={self.jobs_timed_out}",
            f"jobs_unmatched={self.jobs_unmatched}",
            f"verifications={self.verifications}",
            f"mediations={self.mediations}",
            f"mediation_rate={format_float(self.mediation_rate, precision)}",
            f"verification_rate={format_float(self.verification_rate, precision)}",
            f"unclassified={self.unclassified}",
            f"blocks={self.blocks}",
            f"conservation_residual={self.conservation_residual}",
        ]
        for outcome in Outcome:
            lines.append(f"outcome.{outcome.value}={self.outcomes[outcome]}")
        for outcome, prob in self.predicted_outcomes.items():
            lines.append(f"predicted.{outcome.value}={format_float(prob, precision)}")
        for code in sorted(self.aborted_rounds):
            lines.append(f"aborted.{code}={self.aborted_rounds[code]}")
        for agent_id in sorted(self.agents):
            totals = self.agents[agent_id]
            lines.append(f"agent.{agent_id}.ledger_delta={totals.ledger_delta}")
            lines.append(
                f"agent.{agent_id}.private_cost={format_float(totals.private_cost, precision)}"
            )
            lines.append(
                f"agent.{agent_id}.private_benefit="
                f"{format_float(totals.private_benefit, precision)}"
            )
            lines.append(
                f"agent.{agent_id}.realized_utility="
                f"{format_float(totals.realized_utility, precision)}"
            )
        return "\n".join(lines) + "\n"
