"""Leaves of the game tree and the payments each party receives at them."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from compute_market.game.params import GameParams


class RpAction(str, Enum):
    EXECUTE = "execute"
    DECEIVE = "deceive"


class JcAction(str, Enum):
    VERIFY = "verify"
    PASS = "pass"


class GameParty(str, Enum):
    RP = "RP"
    JC = "JC"
    M = "M"


class Outcome(str, Enum):
    """The seven leaves.

    o1/o2: forged result verified and mediated, JC or RP at fault.
    o3: forged result passed. o4: executed result passed.
    o5: executed result verified and normal. o6/o7: executed result
    anomalous and mediated, JC or RP at fault.
    """

    O1 = "o1"
    O2 = "o2"
    O3 = "o3"
    O4 = "o4"
    O5 = "o5"
    O6 = "o6"
    O7 = "o7"

    @property
    def rp_action(self) -> RpAction:
        if self in (Outcome.O1, Outcome.O2, Outcome.O3):
            return RpAction.DECEIVE
        return RpAction.EXECUTE

    @property
    def jc_action(self) -> JcAction:
        if self in (Outcome.O3, Outcome.O4):
            return JcAction.PASS
        return JcAction.VERIFY

    @property
    def mediated(self) -> bool:
        return self in (Outcome.O1, Outcome.O2, Outcome.O6, Outcome.O7)

    @property
    def faulted(self) -> GameParty | None:
        if self in (Outcome.O1, Outcome.O6):
            return GameParty.JC
        if self in (Outcome.O2, Outcome.O7):
            return GameParty.RP
        return None


@dataclass(frozen=True)
class PayoffRow:
    outcome: Outcome
    party: GameParty
    contract_payoff: float
    self_benefit: float

    @property
    def reward(self) -> float:
        return self.contract_payoff + self.self_benefit


def payoff_row(outcome: Outcome, party: GameParty, params: GameParams) -> PayoffRow:
    """Contract payoff and private benefit of ``party`` at ``outcome``."""
    p = params
    d = p.stake

    if party == GameParty.M:
        contract = p.pi_a + (p.mediation_fee if outcome.mediated else 0.0)
        return PayoffRow(outcome, party, contract, 0.0)

    executed = outcome.rp_action == RpAction.EXECUTE
    verified = outcome.jc_action == JcAction.VERIFY

    if party == GameParty.RP:
        if outcome.faulted == GameParty.JC:
            contract = p.pi_d - p.g_r - p.pi_a
        elif outcome.faulted == GameParty.RP:
            contract = -d - p.g_r - p.pi_a
        else:
            contract = p.pi_c - p.g_r - p.pi_a
        return PayoffRow(outcome, party, contract, -p.c_e if executed else -p.c_d)

    if outcome.faulted == GameParty.JC:
        contract = -p.g_j - d - p.g_m - p.pi_a
    elif outcome.faulted == GameParty.RP:
        contract = p.pi_d - p.g_j - p.g_m - p.pi_a
    else:
        contract = -p.g_j - p.pi_c - p.pi_a
    benefit = (p.b if executed else 0.0) - (p.c_v if verified else 0.0)
    return PayoffRow(outcome, party, contract, benefit)


def outcome_reward(outcome: Outcome, party: GameParty, params: GameParams) -> float:
    return payoff_row(outcome, party, params).reward


def payoff_table(params: GameParams) -> list[PayoffRow]:
    return [payoff_row(o, party, params) for o in Outcome for party in GameParty]


def leaf_distribution(
    rp_action: RpAction, jc_action: JcAction, p_a: float, n: int
) -> dict[Outcome, float]:
    """Probability of each reachable leaf once both players have acted."""
    all_normal = p_a**n
    if jc_action == JcAction.PASS:
        return {Outcome.O4 if rp_action == RpAction.EXECUTE else Outcome.O3: 1.0}
    if rp_action == RpAction.DECEIVE:
        return {Outcome.O1: 1.0 - all_normal, Outcome.O2: all_normal}
    return {
        Outcome.O5: p_a,
        Outcome.O6: (1.0 - p_a) * (1.0 - all_normal),
        Outcome.O7: (1.0 - p_a) * all_normal,
    }


def outcome_probabilities(params: GameParams) -> dict[Outcome, float]:
    """Leaf frequencies when the RP executes w.p. p_e and the JC verifies w.p. p_v."""
    probs = dict.fromkeys(Outcome, 0.0)
    for rp_action, p_rp in ((RpAction.EXECUTE, params.p_e), (RpAction.DECEIVE, 1 - params.p_e)):
        for jc_action, p_jc in ((JcAction.VERIFY, params.p_v), (JcAction.PASS, 1 - params.p_v)):
            for outcome, p_leaf in leaf_distribution(
                rp_action, jc_action, params.p_a, params.n
            ).items():
                probs[outcome] += p_rp * p_jc * p_leaf
    return probs
