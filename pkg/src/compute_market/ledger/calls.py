"""Protocol calls accepted by ``Ledger.apply``.

Each call optionally carries a ``call_id``. A call id the ledger has
already applied is rejected with DuplicateCall.
"""

from __future__ import annotations

from dataclasses import dataclass

from compute_market.ledger.types import (
    AccountId,
    JobOffer,
    JobResult,
    Match,
    MediationResult,
    ResourceOffer,
)


@dataclass(frozen=True, slots=True)
class PostJobOffer:
    offer: JobOffer
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class PostResourceOffer:
    offer: ResourceOffer
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class CancelOffer:
    offer_id: str
    caller: AccountId
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class PostMatch:
    match: Match
    solver: AccountId
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class PostResult:
    result: JobResult
    caller: AccountId
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class AcceptResult:
    match_id: str
    caller: AccountId
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class RejectResult:
    match_id: str
    caller: AccountId
    reason: str = "WrongResults"
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class PostMediationResult:
    result: MediationResult
    caller: AccountId
    call_id: str | None = None


@dataclass(frozen=True, slots=True)
class Timeout:
    match_id: str
    caller: AccountId
    call_id: str | None = None


LedgerCall = (
    PostJobOffer
    | PostResourceOffer
    | CancelOffer
    | PostMatch
    | PostResult
    | AcceptResult
    | RejectResult
    | PostMediationResult
    | Timeout
)
