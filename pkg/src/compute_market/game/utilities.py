"""Expected-utility tables, dominance and JC type classification.

A ``UtilityTable`` holds one party's expected reward for each of the four
pure action profiles. ``expected_utilities`` computes it by walking the game
tree; ``tabulated_utilities`` evaluates the closed forms. The two must agree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from compute_market.exceptions import ConventionError
from compute_market.game.outcomes import (
    GameParty,
    JcAction,
    RpAction,
    leaf_distribution,
    outcome_reward,
)
from compute_market.game.params import GameParams

logger = logging.getLogger(__name__)

PROFILES = (
    (RpAction.EXECUTE, JcAction.VERIFY),
    (RpAction.EXECUTE, JcAction.PASS),
    (RpAction.DECEIVE, JcAction.VERIFY),
    (RpAction.DECEIVE, JcAction.PASS),
)


@dataclass(frozen=True)
class UtilityTable:
    """U_EV, U_EP, U_DV, U_DP for one party (first letter RP action, second JC action)."""

    ev: float
    ep: float
    dv: float
    dp: float

    def get(self, rp_action: RpAction, jc_action: JcAction) -> float:
        if rp_action == RpAction.EXECUTE:
            return self.ev if jc_action == JcAction.VERIFY else self.ep
        return self.dv if jc_action == JcAction.VERIFY else self.dp

    def as_dict(self) -> dict[str, float]:
        return {"EV": self.ev, "EP": self.ep, "DV": self.dv, "DP": self.dp}


def _tree_table(params: GameParams, party: GameParty) -> UtilityTable:
    values = []
    for rp_action, jc_action in PROFILES:
        leaves = leaf_distribution(rp_action, jc_action, params.p_a, params.n)
        values.append(
            sum(prob * outcome_reward(outcome, party, params) for outcome, prob in leaves.items())
        )
    return UtilityTable(*values)


def expected_utilities(params: GameParams) -> tuple[UtilityTable, UtilityTable]:
    """(RP table, JC table) as probability-weighted sums over the reachable leaves."""
    return _tree_table(params, GameParty.RP), _tree_table(params, GameParty.JC)


def tabulated_utilities(params: GameParams) -> tuple[UtilityTable, UtilityTable]:
    """(RP table, JC table) from the closed-form expressions."""
    p = params
    pa = p.p_a
    q = pa**p.n
    d = p.stake
    anomalous = 1.0 - pa

    rp = UtilityTable(
        ev=-p.c_e - p.g_r - p.pi_a + pa * p.pi_c + anomalous * (1 - q) * p.pi_d
        - anomalous * q * d,
        ep=p.pi_c - p.c_e - p.g_r - p.pi_a,
        dv=-p.c_d - p.g_r - p.pi_a + (1 - q) * p.pi_d - q * d,
        dp=p.pi_c - p.c_d - p.g_r - p.pi_a,
    )
    jc = UtilityTable(
        ev=p.b - p.g_j - p.c_v - p.pi_a - pa * p.pi_c - anomalous * (1 - q) * d
        - anomalous * p.g_m + anomalous * q * p.pi_d,
        ep=p.b - p.g_j - p.pi_c - p.pi_a,
        dv=-p.g_j - p.g_m - p.c_v - p.pi_a - (1 - q) * d + q * p.pi_d,
        dp=-p.g_j - p.pi_c - p.pi_a,
    )
    return rp, jc


def require_convention(params: GameParams) -> None:
    if not params.follows_convention:
        raise ConventionError(
            "simplified forms need pi_d = pi_c, pi_c_hat = pi_c and d = pi_c*(theta+n)"
        )


def simplified_dominance(params: GameParams) -> tuple[UtilityTable, UtilityTable]:
    """Dominance tables with the terms shared by compared cells removed.

    The RP table drops what is common to a JC column, so only EV-vs-DV and
    EP-vs-DP comparisons are meaningful. The JC table drops what is common to
    an RP row, so only EV-vs-EP and DV-vs-DP are meaningful.
    """
    require_convention(params)
    p = params
    q = p.p_a**p.n
    scale = p.pi_c * (p.n + p.theta + 1)

    rp = UtilityTable(
        ev=-p.c_e + p.p_a ** (p.n + 1) * scale,
        ep=-p.c_e,
        dv=-p.c_d,
        dp=-p.c_d,
    )
    mediation_gain = 2 * p.pi_c - p.g_m
    jc = UtilityTable(
        ev=(1 - p.p_a) * mediation_gain - (1 - p.p_a) * (1 - q) * scale,
        ep=p.c_v,
        dv=mediation_gain - (1 - q) * scale,
        dp=p.c_v,
    )
    return rp, jc


@dataclass(frozen=True)
class ExecuteCondition:
    exact: bool
    sufficient: bool
    margin: float


def rp_execute_condition(params: GameParams) -> ExecuteCondition:
    """Whether the RP prefers executing to deceiving when the JC verifies.

    ``margin`` is U_EV^RP - U_DV^RP; under the usual convention it equals
    p_a^(n+1)·π_c·(n+θ+1) - (c_e - c_d). ``sufficient`` is the coarser
    test p_a^(n+1) > 1/2.
    """
    rp, _ = tabulated_utilities(params)
    margin = rp.ev - rp.dv
    return ExecuteCondition(
        exact=margin > 0,
        sufficient=params.p_a ** (params.n + 1) > 0.5,
        margin=margin,
    )


class JcType(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    TYPE4 = "Type4"

    @property
    def participates(self) -> bool:
        # A JC that always passes invites deception, so it gains nothing from joining.
        return self != JcType.TYPE4

    @property
    def description(self) -> str:
        return {
            JcType.TYPE1: "always verifies",
            JcType.TYPE2: "verifies only an executing RP",
            JcType.TYPE3: "mixes between verifying and passing",
            JcType.TYPE4: "never verifies; should not participate",
        }[self]


def classify_jc_type(params: GameParams) -> JcType:
    _, jc = tabulated_utilities(params)
    verify_if_executed = jc.ev > jc.ep
    verify_if_deceived = jc.dv > jc.dp
    if verify_if_executed and verify_if_deceived:
        return JcType.TYPE1
    if verify_if_executed and jc.dv < jc.dp:
        return JcType.TYPE2
    if jc.ev < jc.ep and verify_if_deceived:
        return JcType.TYPE3
    return JcType.TYPE4


@dataclass(frozen=True)
class JcThresholds:
    """Verification cost at which the JC stops verifying, per RP action."""

    execute: float
    deceive: float


def jc_type_thresholds(params: GameParams) -> JcThresholds:
    _, jc = tabulated_utilities(params)
    return JcThresholds(
        execute=jc.ev - jc.ep + params.c_v,
        deceive=jc.dv - jc.dp + params.c_v,
    )


def pure_equilibria(params: GameParams) -> list[tuple[RpAction, JcAction]]:
    """Pure-strategy Nash equilibria of the 2x2 game (weak best responses)."""
    rp, jc = tabulated_utilities(params)
    found = []
    for rp_action, jc_action in PROFILES:
        other_rp = RpAction.DECEIVE if rp_action == RpAction.EXECUTE else RpAction.EXECUTE
        other_jc = JcAction.PASS if jc_action == JcAction.VERIFY else JcAction.VERIFY
        rp_best = rp.get(rp_action, jc_action) >= rp.get(other_rp, jc_action)
        jc_best = jc.get(rp_action, jc_action) >= jc.get(rp_action, other_jc)
        if rp_best and jc_best:
            found.append((rp_action, jc_action))
    logger.debug("pure equilibria: %s", found)
    return found
