"""Domain types for the market ledger.

Money is an exact integer count of micro-units (1 unit = 10⁻⁶ of the
display currency). Offers, results and mediation verdicts are frozen
pydantic models; ledger records and events are frozen dataclasses so the
hot settlement path stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Money = int
AccountId = str

MICRO_UNITS = 1_000_000
INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

NonNegInt = Annotated[int, Field(ge=0)]


class Role(str, Enum):
    JOB_CREATOR = "JobCreator"
    RESOURCE_PROVIDER = "ResourceProvider"
    MEDIATOR = "Mediator"
    SOLVER = "Solver"
    CONTRACT_SINK = "ContractSink"


CONTRACT_SINK_ID: AccountId = "contract-sink"


class ResultStatus(str, Enum):
    """Outcome an RP reports for a job execution."""

    COMPLETED = "Completed"
    DECLINED = "Declined"
    JOB_DESCRIPTION_ERROR = "JobDescriptionError"
    JOB_NOT_FOUND = "JobNotFound"
    MEMORY_EXCEEDED = "MemoryExceeded"
    STORAGE_EXCEEDED = "StorageExceeded"
    INSTRUCTIONS_EXCEEDED = "InstructionsExceeded"
    BANDWIDTH_EXCEEDED = "BandwidthExceeded"
    EXCEPTION_OCCURED = "ExceptionOccured"
    DIRECTORY_UNAVAILABLE = "DirectoryUnavailable"


class Verdict(str, Enum):
    """Reason a mediator gives for blaming a party."""

    RESULT_NOT_FOUND = "ResultNotFound"
    TOO_MUCH_COST = "TooMuchCost"
    WRONG_RESULTS = "WrongResults"
    CORRECT_RESULTS = "CorrectResults"
    INVALID_RESULT_STATUS = "InvalidResultStatus"


class Party(str, Enum):
    RESOURCE_PROVIDER = "ResourceProvider"
    JOB_CREATOR = "JobCreator"


class JobFsmState(str, Enum):
    OFFER_POSTED = "OfferPosted"
    CANCELED = "Canceled"
    MATCHED = "Matched"
    RESULT_POSTED = "ResultPosted"
    MEDIATION_REQUESTED = "MediationRequested"
    CLOSED = "Closed"
    TIMED_OUT = "TimedOut"


# Edges of the job state machine. Anything else is WrongState.
JOB_TRANSITIONS: dict[JobFsmState, frozenset[JobFsmState]] = {
    JobFsmState.OFFER_POSTED: frozenset({JobFsmState.CANCELED, JobFsmState.MATCHED}),
    JobFsmState.MATCHED: frozenset({JobFsmState.RESULT_POSTED, JobFsmState.TIMED_OUT}),
    JobFsmState.RESULT_POSTED: frozenset(
        {JobFsmState.CLOSED, JobFsmState.MEDIATION_REQUESTED}
    ),
    JobFsmState.MEDIATION_REQUESTED: frozenset({JobFsmState.CLOSED, JobFsmState.TIMED_OUT}),
    JobFsmState.CANCELED: frozenset(),
    JobFsmState.CLOSED: frozenset(),
    JobFsmState.TIMED_OUT: frozenset(),
}

TERMINAL_STATES = frozenset({JobFsmState.CANCELED, JobFsmState.CLOSED, JobFsmState.TIMED_OUT})


class EventKind(str, Enum):
    ACTOR_REGISTERED = "ActorRegistered"
    MEDIATOR_REGISTERED = "MediatorRegistered"
    JOB_OFFER_POSTED = "JobOfferPosted"
    RESOURCE_OFFER_POSTED = "ResourceOfferPosted"
    MATCHED = "Matched"
    RESULT_POSTED = "ResultPosted"
    RESULT_REJECTED = "ResultRejected"
    JOB_ASSIGNED_FOR_MEDIATION = "JobAssignedForMediation"
    MEDIATION_RESULT_POSTED = "MediationResultPosted"
    MATCH_CLOSED = "MatchClosed"
    JOB_OFFER_CANCELED = "JobOfferCanceled"
    RESOURCE_OFFER_CANCELED = "ResourceOfferCanceled"
    JOB_TIMED_OUT = "JobTimedOut"
    MEDIATION_TIMED_OUT = "MediationTimedOut"


class PiDConvention(str, Enum):
    """How the payout to the wronged party is sized at mediation."""

    ACTUAL = "actual"  # π_c from the posted usage, π̂_c when no usable result
    ESTIMATE = "estimate"  # π̂_c
    PENALTY = "penalty"  # π̂_c·θ


# --- Value objects -----------------------------------------------------------


class ResourceVector(BaseModel):
    """Instruction count and byte quantities; used for limits, capacities and usage."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    instruction_count: NonNegInt = 0
    bandwidth: NonNegInt = 0
    ram: NonNegInt = 0
    local_storage: NonNegInt = 0

    def fits_within(self, other: ResourceVector) -> bool:
        return (
            self.instruction_count <= other.instruction_count
            and self.bandwidth <= other.bandwidth
            and self.ram <= other.ram
            and self.local_storage <= other.local_storage
        )

    def capped_by(self, other: ResourceVector) -> ResourceVector:
        return ResourceVector(
            instruction_count=min(self.instruction_count, other.instruction_count),
            bandwidth=min(self.bandwidth, other.bandwidth),
            ram=min(self.ram, other.ram),
            local_storage=min(self.local_storage, other.local_storage),
        )


class Account(BaseModel):
    """A registered actor and the profile the matcher needs."""

    model_config = ConfigDict(frozen=True)

    account_id: AccountId
    role: Role
    arch: str = "amd64"
    trusted_mediators: frozenset[AccountId] = frozenset()
    trusted_directories: frozenset[str] = frozenset()
    time_per_instruction_us: Annotated[int, Field(ge=0)] = 1


class PlatformParams(BaseModel):
    """Contract-level constants fixed at deployment."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    theta: NonNegInt = 50
    n: Annotated[int, Field(gt=0)] = 2
    g_j: NonNegInt = 0
    g_r: NonNegInt = 0
    g_m: NonNegInt = 0
    pi_a: NonNegInt = 0
    reaction_deadline_ms: Annotated[int, Field(gt=0)] = 30_000
    mediation_deadline_ms: Annotated[int, Field(gt=0)] = 300_000
    pi_d_convention: PiDConvention = PiDConvention.ACTUAL
    default_match_incentive: NonNegInt = 0


class JobOffer(BaseModel):
    """A JC's request to have one job executed."""

    model_config = ConfigDict(frozen=True)

    job_creator: AccountId
    limits: ResourceVector
    instruction_max_price: Annotated[int, Field(gt=0)]
    bandwidth_max_price: Annotated[int, Field(gt=0)]
    completion_deadline_ms: NonNegInt
    match_incentive: NonNegInt = 0
    first_layer_hash: str = ""
    directory: str = "dir-0"
    job_hash: str = ""
    arch: str = "amd64"
    deposit_value: NonNegInt

    @field_validator("limits")
    @classmethod
    def validate_limits(cls, v: ResourceVector) -> ResourceVector:
        if v.instruction_count <= 0 or v.bandwidth <= 0:
            raise ValueError("instruction and bandwidth limits must be strictly positive")
        return v

    @property
    def price_estimate(self) -> Money:
        """π̂_c: the most the JC can be charged under its own limits and bids."""
        return (
            self.limits.instruction_count * self.instruction_max_price
            + self.limits.bandwidth * self.bandwidth_max_price
        )


class ResourceOffer(BaseModel):
    """An RP's advertisement of capacity and ask prices."""

    model_config = ConfigDict(frozen=True)

    res_provider: AccountId
    capacities: ResourceVector
    instruction_price: Annotated[int, Field(gt=0)]
    bandwidth_price: Annotated[int, Field(gt=0)]
    match_incentive: NonNegInt = 0
    verification_count: NonNegInt = 0
    deposit_value: NonNegInt

    @property
    def price_estimate(self) -> Money:
        """Full-capacity price at the RP's asks; sizes the RP deposit."""
        return (
            self.capacities.instruction_count * self.instruction_price
            + self.capacities.bandwidth * self.bandwidth_price
        )


class JobResult(BaseModel):
    """What an RP reports after running (or failing to run) a matched job."""

    model_config = ConfigDict(frozen=True)

    match_id: str
    status: ResultStatus
    result_hash: str = ""
    usage: ResourceVector = ResourceVector()
    uri: str = ""
    timestamp_ms: NonNegInt = 0


class MediationResult(BaseModel):
    """A mediator's verdict on a disputed match."""

    model_config = ConfigDict(frozen=True)

    match_id: str
    verdict: Verdict
    faulty_party: Party
    usage: ResourceVector = ResourceVector()
    result_hash: str = ""
    non_deterministic: bool = False

    @model_validator(mode="after")
    def validate_blame(self) -> MediationResult:
        if self.verdict == Verdict.CORRECT_RESULTS and self.faulty_party != Party.JOB_CREATOR:
            raise ValueError("CorrectResults verdict must blame the JobCreator")
        if self.non_deterministic and self.faulty_party != Party.JOB_CREATOR:
            raise ValueError("a non-deterministic job is the JobCreator's fault")
        return self


class Match(BaseModel):
    """A solver's pairing of one job offer with one resource offer."""

    model_config = ConfigDict(frozen=True)

    job_offer_id: str
    resource_offer_id: str
    mediator: AccountId
    match_time_ms: NonNegInt = 0


# --- Ledger records ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class JobOfferRecord:
    offer_id: str
    arrival: int
    offer: JobOffer
    state: JobFsmState = JobFsmState.OFFER_POSTED
    match_id: str | None = None


@dataclass(frozen=True, slots=True)
class ResourceOfferRecord:
    offer_id: str
    arrival: int
    offer: ResourceOffer
    state: JobFsmState = JobFsmState.OFFER_POSTED
    match_id: str | None = None


@dataclass(frozen=True, slots=True)
class MatchRecord:
    match_id: str
    match: Match
    job_creator: AccountId
    res_provider: AccountId
    price_estimate: Money
    result: JobResult | None = None
    reaction_deadline_ms: int | None = None
    rejection_reason: str | None = None
    mediation_requested_ms: int | None = None
    mediation: MediationResult | None = None


@dataclass(frozen=True, slots=True)
class LedgerEvent:
    """One entry of the append-only event log, ordered by (block, index)."""

    block: int
    index: int
    kind: EventKind
    subject_id: str
    fields: tuple[tuple[str, str], ...] = field(default=())

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.block, self.index)

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.fields:
            if k == key:
                return v
        return default
