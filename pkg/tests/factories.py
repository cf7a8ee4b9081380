"""Builders for ledger objects shared across test modules."""

from __future__ import annotations

from compute_market.ledger.contract import Ledger
from compute_market.ledger.types import (
    Account,
    JobOffer,
    JobResult,
    Match,
    ResourceOffer,
    ResourceVector,
    ResultStatus,
    Role,
)

JC = "jc-1"
RP = "rp-1"
MEDIATOR = "med-1"
SOLVER = "solver-1"
START_BALANCE = 10_000
DEADLINE_MS = 1_000_000


def job_offer(**overrides: object) -> JobOffer:
    """JO with π̂_c = 4·2 + 2·1 = 10, so d_min = 521 at θ=50, n=2, π_a=1."""
    fields: dict[str, object] = {
        "job_creator": JC,
        "limits": ResourceVector(instruction_count=4, bandwidth=2, ram=50, local_storage=50),
        "instruction_max_price": 2,
        "bandwidth_max_price": 1,
        "completion_deadline_ms": DEADLINE_MS,
        "deposit_value": 521,
    }
    fields.update(overrides)
    return JobOffer(**fields)


def resource_offer(**overrides: object) -> ResourceOffer:
    """RO with capacity estimate 6·1 + 4·1 = 10, so d_min = 521 as well."""
    fields: dict[str, object] = {
        "res_provider": RP,
        "capacities": ResourceVector(instruction_count=6, bandwidth=4, ram=100, local_storage=100),
        "instruction_price": 1,
        "bandwidth_price": 1,
        "deposit_value": 521,
    }
    fields.update(overrides)
    return ResourceOffer(**fields)


def account(account_id: str, role: Role, **overrides: object) -> Account:
    fields: dict[str, object] = {
        "account_id": account_id,
        "role": role,
        "trusted_mediators": frozenset({MEDIATOR}),
        "trusted_directories": frozenset({"dir-0"}),
    }
    fields.update(overrides)
    return Account(**fields)


def market_accounts() -> list[Account]:
    return [
        account(JC, Role.JOB_CREATOR),
        account(RP, Role.RESOURCE_PROVIDER),
        account(MEDIATOR, Role.MEDIATOR, trusted_mediators=frozenset()),
        account(
            SOLVER, Role.SOLVER, trusted_mediators=frozenset(), trusted_directories=frozenset()
        ),
    ]


def post_and_match(
    ledger: Ledger, jo: JobOffer | None = None, ro: ResourceOffer | None = None
) -> str:
    """Post one JO and one RO and match them; returns the match id."""
    jo_id = ledger.post_job_offer(jo or job_offer()).subject_id
    ro_id = ledger.post_resource_offer(ro or resource_offer()).subject_id
    event = ledger.post_match(
        Match(job_offer_id=jo_id, resource_offer_id=ro_id, mediator=MEDIATOR), SOLVER
    )
    return event.subject_id


def completed_result(match_id: str, instructions: int = 4, bandwidth: int = 2) -> JobResult:
    return JobResult(
        match_id=match_id,
        status=ResultStatus.COMPLETED,
        result_hash="true-hash",
        usage=ResourceVector(instruction_count=instructions, bandwidth=bandwidth),
    )
