"""Strategies of job creators and resource providers, and their off-ledger accounts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

from compute_market.agents.jobs import ANOMALOUS_SPACE, JobSpec, execute_job
from compute_market.agents.rng import RngStream
from compute_market.ledger.types import JobResult, ResultStatus

logger = logging.getLogger(__name__)

Probability = Annotated[float, Field(ge=0.0, le=1.0)]
NonNegative = Annotated[float, Field(ge=0.0)]


class PrivateCosts(BaseModel):
    """Costs and benefit that never touch the ledger, in ledger currency units."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    b: NonNegative = 0.0
    c_e: NonNegative = 0.0
    c_d: NonNegative = 0.0
    c_v: NonNegative = 0.0


class JcStrategy(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    p_a: Probability = 1.0
    p_v: Probability = 0.0
    reject_on_anomaly: bool = True
    p_ignore: Probability = 0.0
    detection_probability: Probability = 1.0


class RpStrategy(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    p_e: Probability = 1.0
    p_unresponsive: Probability = 0.0


@dataclass
class PrivateAccount:
    """Running totals of an agent's off-ledger costs and benefits."""

    costs: dict[str, float] = field(default_factory=dict)
    benefit: float = 0.0

    def charge(self, kind: str, amount: float) -> None:
        if amount:
            self.costs[kind] = self.costs.get(kind, 0.0) + amount

    def credit(self, amount: float) -> None:
        self.benefit += amount

    @property
    def total_cost(self) -> float:
        return sum(self.costs.values())

    @property
    def net(self) -> float:
        return self.benefit - self.total_cost


@dataclass(frozen=True)
class RpOutput:
    result: JobResult | None
    executed: bool
    is_normal: bool


def rp_act(
    strategy: RpStrategy,
    spec: JobSpec,
    match_id: str,
    rng: RngStream,
    account: PrivateAccount,
    costs: PrivateCosts,
) -> RpOutput:
    """Execute the job or forge a result. ``result`` is None when the RP stays silent."""
    if rng.bernoulli(strategy.p_unresponsive):
        return RpOutput(result=None, executed=False, is_normal=False)

    if rng.bernoulli(strategy.p_e):
        execution = execute_job(spec, rng)
        account.charge("c_e", costs.c_e)
        result_hash, is_normal, executed = execution.result_hash, execution.is_normal, True
    else:
        account.charge("c_d", costs.c_d)
        result_hash = spec.forged_hash(rng.integers(0, ANOMALOUS_SPACE))
        is_normal, executed = False, False

    result = JobResult(
        match_id=match_id,
        status=ResultStatus.COMPLETED,
        result_hash=result_hash,
        usage=spec.resource_profile,
    )
    return RpOutput(result=result, executed=executed, is_normal=is_normal)


class Reaction(str, Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    IGNORE = "Ignore"


@dataclass(frozen=True)
class JcDecision:
    reaction: Reaction
    verified: bool


def jc_react(
    strategy: JcStrategy,
    spec: JobSpec,
    result: JobResult,
    rng: RngStream,
    account: PrivateAccount,
    costs: PrivateCosts,
) -> JcDecision:
    """Pass, or verify at cost c_v and reject anything other than the true result."""
    if rng.bernoulli(strategy.p_ignore):
        return JcDecision(Reaction.IGNORE, verified=False)
    if not rng.bernoulli(strategy.p_v):
        return JcDecision(Reaction.ACCEPT, verified=False)

    account.charge("c_v", costs.c_v)
    if result.result_hash == spec.true_result_hash:
        return JcDecision(Reaction.ACCEPT, verified=True)
    if spec.is_anomalous(result.result_hash):
        reaction = Reaction.REJECT if strategy.reject_on_anomaly else Reaction.ACCEPT
        return JcDecision(reaction, verified=True)
    if rng.bernoulli(strategy.detection_probability):
        return JcDecision(Reaction.REJECT, verified=True)
    logger.debug("forged result for %s went undetected", spec.job_id)
    return JcDecision(Reaction.ACCEPT, verified=True)
