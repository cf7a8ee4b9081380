"""The earlier comply/disobey model of JC and RP incentives.

Both players either comply (JC submits a deterministic job and verifies at
rate p; RP executes) or disobey (JC submits a non-deterministic job and
rejects; RP forges). Mediation is correct with probability P_m.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from compute_market.exceptions import UnknownGridField, ZeroDenominator
from compute_market.game.params import LegacyParams


class LegacyStrategy(str, Enum):
    COMPLY = "Comply"
    DISOBEY = "Disobey"


@dataclass(frozen=True)
class LegacyCell:
    u_jc: float
    u_rp: float


@dataclass(frozen=True)
class LegacyTable:
    """Expected utilities indexed by (JC strategy, RP strategy)."""

    cells: dict[tuple[LegacyStrategy, LegacyStrategy], LegacyCell]

    def get(self, jc: LegacyStrategy, rp: LegacyStrategy) -> LegacyCell:
        return self.cells[(jc, rp)]


def legacy_utilities(lp: LegacyParams) -> LegacyTable:
    q, p, pj, pm = lp.Q, lp.p, lp.P_j, lp.P_m
    r, f, b, m = lp.r, lp.f, lp.B, lp.M
    c, cd, cj = lp.C, lp.C_d, lp.C_j
    comply, disobey = LegacyStrategy.COMPLY, LegacyStrategy.DISOBEY

    cells = {
        (comply, comply): LegacyCell(
            u_jc=q * (b - r) + (1 - q) * f - p * cj,
            u_rp=q * r - (1 - q) * (f + m) - c,
        ),
        (comply, disobey): LegacyCell(
            u_jc=-(1 - p * pj) * r + p * pj * f - p * cj,
            u_rp=(1 - p * pj) * r - p * pj * (f + m) - cd,
        ),
        (disobey, comply): LegacyCell(
            u_jc=q * (b + (1 - pm) * f - pm * (f + m + r)) + (1 - q) * f,
            u_rp=q * (pm * (f + r) - (1 - pm) * (f + m)) - (1 - q) * (f + m) - c,
        ),
        (disobey, disobey): LegacyCell(
            u_jc=(1 - pm) * f - pm * (f + m + r),
            u_rp=pm * (f + r) - (1 - pm) * (f + m) - cd,
        ),
    }
    return LegacyTable(cells)


@dataclass(frozen=True)
class LegacyEquilibrium:
    is_equilibrium: bool
    p_lower: float
    p_upper: float


def legacy_honest_equilibrium(lp: LegacyParams) -> LegacyEquilibrium:
    """Whether (Comply, Comply) is a Nash equilibrium, with the bounds on p that make it one."""
    if lp.C_j <= 0:
        raise ZeroDenominator("upper bound on p needs a positive verification cost C_j")
    if lp.P_j <= 0 or lp.r + lp.f + lp.M <= 0:
        raise ZeroDenominator("lower bound on p needs P_j > 0 and r + f + M > 0")

    p_upper = lp.Q * (lp.P_m * (2 * lp.f + lp.M + lp.r) - lp.r - lp.f) / lp.C_j
    p_lower = (1 - lp.Q) / lp.P_j + (lp.C - lp.C_d) / (lp.P_j * (lp.r + lp.f + lp.M))
    return LegacyEquilibrium(
        is_equilibrium=p_lower <= lp.p <= p_upper,
        p_lower=p_lower,
        p_upper=p_upper,
    )


def honest_is_best_response(lp: LegacyParams) -> bool:
    """Direct check that neither player gains by leaving (Comply, Comply)."""
    table = legacy_utilities(lp)
    comply, disobey = LegacyStrategy.COMPLY, LegacyStrategy.DISOBEY
    honest = table.get(comply, comply)
    return (
        honest.u_jc >= table.get(disobey, comply).u_jc
        and honest.u_rp >= table.get(comply, disobey).u_rp
    )


@dataclass(frozen=True)
class LegacySweepRow:
    value: float
    is_equilibrium: bool
    u_jc: float
    u_rp: float


def legacy_sweep(lp: LegacyParams, field: str, values: list[float]) -> list[LegacySweepRow]:
    """Honest-profile utilities and the equilibrium flag as one parameter varies."""
    if field not in LegacyParams.model_fields:
        raise UnknownGridField(field)
    rows = []
    for value in values:
        varied = lp.replace(**{field: value})
        honest = legacy_utilities(varied).get(LegacyStrategy.COMPLY, LegacyStrategy.COMPLY)
        rows.append(
            LegacySweepRow(
                value=value,
                is_equilibrium=legacy_honest_equilibrium(varied).is_equilibrium,
                u_jc=honest.u_jc,
                u_rp=honest.u_rp,
            )
        )
    return rows
