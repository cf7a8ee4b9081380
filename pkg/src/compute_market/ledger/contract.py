"""In-memory contract: validates protocol calls, holds escrow and settles matches.

Every public operation validates first and then commits a list of
transfers in one step, so a rejected call leaves the ledger untouched.
Money moves only between accounts, per-offer escrow lines and the
ContractSink; the genesis total is therefore constant.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, replace
from types import MappingProxyType

from compute_market.exceptions import (
    AlreadyMatched,
    DeadlineNotReached,
    DuplicateCall,
    Infeasible,
    InsufficientBalance,
    InsufficientDeposit,
    InvalidUsage,
    MoneyOverflow,
    NotAssignedMediator,
    NotJobCreator,
    NotMatchedProvider,
    NotOwner,
    NotParty,
    PastDeadline,
    ReactionWindowOpen,
    StaleOffer,
    UnregisteredActor,
    WrongState,
)
from compute_market.ledger.calls import (
    AcceptResult,
    CancelOffer,
    LedgerCall,
    PostJobOffer,
    PostMatch,
    PostMediationResult,
    PostResourceOffer,
    PostResult,
    RejectResult,
    Timeout,
)
from compute_market.ledger.pricing import compute_min_deposit, price_usage
from compute_market.ledger.types import (
    CONTRACT_SINK_ID,
    INT64_MAX,
    JOB_TRANSITIONS,
    Account,
    AccountId,
    EventKind,
    JobFsmState,
    JobOffer,
    JobOfferRecord,
    JobResult,
    LedgerEvent,
    Match,
    MatchRecord,
    MediationResult,
    Money,
    Party,
    PiDConvention,
    PlatformParams,
    ResourceOffer,
    ResourceOfferRecord,
    ResultStatus,
    Role,
)
from compute_market.matching.feasibility import check_feasible

logger = logging.getLogger(__name__)

# Ledger positions: ("account", id) or ("escrow", offer_id).
_Key = tuple[str, str]
_Transfer = tuple[_Key, _Key, Money]


def _acct(account_id: AccountId) -> _Key:
    return ("account", account_id)


def _esc(offer_id: str) -> _Key:
    return ("escrow", offer_id)


_SINK = _acct(CONTRACT_SINK_ID)


@dataclass(frozen=True)
class LedgerState:
    """Read-only snapshot of the ledger, safe to hand to analysis code."""

    block: int
    now_ms: int
    genesis_total: Money
    balances: Mapping[AccountId, Money]
    escrow: Mapping[str, Money]
    accounts: Mapping[AccountId, Account]
    job_offers: Mapping[str, JobOfferRecord]
    resource_offers: Mapping[str, ResourceOfferRecord]
    matches: Mapping[str, MatchRecord]
    events: tuple[LedgerEvent, ...]

    @property
    def conservation_residual(self) -> Money:
        return self.genesis_total - sum(self.balances.values()) - sum(self.escrow.values())


class Ledger:
    """Single-owner contract state machine.

    Usage::

        ledger = Ledger.genesis(platform, [(jc_account, 1000), (rp_account, 1000)])
        event = ledger.post_job_offer(offer)
        offer_id = event.subject_id
    """

    def __init__(self, platform: PlatformParams | None = None):
        self.platform = platform or PlatformParams()
        self._accounts: dict[AccountId, Account] = {
            CONTRACT_SINK_ID: Account(account_id=CONTRACT_SINK_ID, role=Role.CONTRACT_SINK)
        }
        self._balances: dict[AccountId, Money] = {CONTRACT_SINK_ID: 0}
        self._escrow: dict[str, Money] = {}
        self._job_offers: dict[str, JobOfferRecord] = {}
        self._resource_offers: dict[str, ResourceOfferRecord] = {}
        self._matches: dict[str, MatchRecord] = {}
        # Offers still in OfferPosted, in arrival order.
        self._open_offers: dict[str, None] = {}
        self._history: dict[str, list[JobFsmState]] = {}
        self._events: list[LedgerEvent] = []
        self._applied_calls: set[str] = set()
        self._genesis_total: Money = 0
        self._sealed = False
        self._block = 0
        self._now_ms = 0
        self._block_index = 0
        self._arrivals = 0
        self._job_seq = 0
        self._resource_seq = 0
        self._match_seq = 0

    @classmethod
    def genesis(
        cls,
        platform: PlatformParams | None = None,
        accounts: Iterable[tuple[Account, Money]] = (),
    ) -> Ledger:
        """Create a ledger with funded accounts; their sum becomes the genesis total."""
        ledger = cls(platform)
        for account, balance in accounts:
            ledger.register_actor(account, balance)
        return ledger

    # --- Clock --------------------------------------------------------------

    @property
    def block(self) -> int:
        return self._block

    @property
    def now_ms(self) -> int:
        return self._now_ms

    def advance(self, block: int, now_ms: int) -> None:
        """Move the ledger clock forward. Time never runs backwards."""
        if block < self._block or now_ms < self._now_ms:
            raise ValueError(
                f"clock cannot go back: block {self._block}->{block}, ms {self._now_ms}->{now_ms}"
            )
        if block != self._block:
            self._block_index = 0
        self._block = block
        self._now_ms = now_ms

    # --- Queries ------------------------------------------------------------

    @property
    def genesis_total(self) -> Money:
        return self._genesis_total

    @property
    def events(self) -> tuple[LedgerEvent, ...]:
        return tuple(self._events)

    @property
    def accounts(self) -> Mapping[AccountId, Account]:
        return MappingProxyType(self._accounts)

    def balance(self, account_id: AccountId) -> Money:
        return self._balances.get(account_id, 0)

    def escrow_of(self, offer_id: str) -> Money:
        return self._escrow.get(offer_id, 0)

    def job_offer(self, offer_id: str) -> JobOfferRecord:
        return self._job_offers[offer_id]

    def resource_offer(self, offer_id: str) -> ResourceOfferRecord:
        return self._resource_offers[offer_id]

    def match(self, match_id: str) -> MatchRecord:
        return self._matches[match_id]

    def job_state(self, match_id: str) -> JobFsmState:
        return self._job_offers[self._matches[match_id].match.job_offer_id].state

    def job_history(self, job_offer_id: str) -> list[JobFsmState]:
        return list(self._history[job_offer_id])

    def pending_job_offers(self) -> list[JobOfferRecord]:
        return [self._job_offers[i] for i in self._open_offers if i in self._job_offers]

    def pending_resource_offers(self) -> list[ResourceOfferRecord]:
        return [self._resource_offers[i] for i in self._open_offers if i in self._resource_offers]

    def conservation_residual(self) -> Money:
        """Genesis total minus every balance and escrow line. Always 0."""
        return self._genesis_total - sum(self._balances.values()) - sum(self._escrow.values())

    def snapshot(self) -> LedgerState:
        return LedgerState(
            block=self._block,
            now_ms=self._now_ms,
            genesis_total=self._genesis_total,
            balances=MappingProxyType(dict(self._balances)),
            escrow=MappingProxyType(dict(self._escrow)),
            accounts=MappingProxyType(dict(self._accounts)),
            job_offers=MappingProxyType(dict(self._job_offers)),
            resource_offers=MappingProxyType(dict(self._resource_offers)),
            matches=MappingProxyType(dict(self._matches)),
            events=tuple(self._events),
        )

    # --- Call interface -----------------------------------------------------

    def apply(self, call: LedgerCall) -> LedgerEvent:
        """Apply one protocol call. Rejected calls raise LedgerError and change nothing."""
        call_id = call.call_id
        if call_id is not None and call_id in self._applied_calls:
            raise DuplicateCall(f"call '{call_id}' was already applied")
        match call:
            case PostJobOffer(offer=offer):
                event = self.post_job_offer(offer)
            case PostResourceOffer(offer=offer):
                event = self.post_resource_offer(offer)
            case CancelOffer(offer_id=offer_id, caller=caller):
                event = self.cancel_offer(offer_id, caller)
            case PostMatch(match=m, solver=solver):
                event = self.post_match(m, solver)
            case PostResult(result=result, caller=caller):
                event = self.post_result(result, caller)
            case AcceptResult(match_id=match_id, caller=caller):
                event = self.accept_result(match_id, caller)
            case RejectResult(match_id=match_id, caller=caller, reason=reason):
                event = self.reject_result(match_id, caller, reason)
            case PostMediationResult(result=mr, caller=caller):
                event = self.post_mediation_result(mr, caller)
            case Timeout(match_id=match_id, caller=caller):
                event = self.timeout(match_id, caller)
            case _:
                raise TypeError(f"not a ledger call: {call!r}")
        if call_id is not None:
            self._applied_calls.add(call_id)
        return event

    # --- Registration -------------------------------------------------------

    def register_actor(self, account: Account, balance: Money = 0) -> LedgerEvent:
        """Register an account. Funding is only possible before the first protocol call."""
        if account.account_id in self._accounts:
            raise DuplicateCall(f"account '{account.account_id}' is already registered")
        if balance < 0 or balance > INT64_MAX:
            raise MoneyOverflow(f"opening balance {balance} out of range")
        if balance and self._sealed:
            raise WrongState("ledger", "sealed", "funding a new account")
        if self._genesis_total + balance > INT64_MAX:
            raise MoneyOverflow("genesis total exceeds 64-bit range")
        self._accounts[account.account_id] = account
        self._balances[account.account_id] = balance
        self._genesis_total += balance
        kind = (
            EventKind.MEDIATOR_REGISTERED
            if account.role == Role.MEDIATOR
            else EventKind.ACTOR_REGISTERED
        )
        return self._emit(kind, account.account_id, role=account.role.value, balance=balance)

    def register_mediator(self, account: Account, balance: Money = 0) -> LedgerEvent:
        if account.role != Role.MEDIATOR:
            raise WrongState(account.account_id, account.role.value, "register_mediator")
        return self.register_actor(account, balance)

    # --- Offers -------------------------------------------------------------

    def post_job_offer(self, offer: JobOffer) -> LedgerEvent:
        self._require_role(offer.job_creator, Role.JOB_CREATOR)
        p = self.platform
        required = compute_min_deposit(offer.price_estimate, p.theta, p.n, p.pi_a)
        if offer.deposit_value < required:
            raise InsufficientDeposit(offer.deposit_value, required)
        self._require_balance(offer.job_creator, offer.deposit_value + p.g_j)

        self._job_seq += 1
        offer_id = f"JO-{self._job_seq:06d}"
        self._commit(
            [
                (_acct(offer.job_creator), _esc(offer_id), offer.deposit_value),
                (_acct(offer.job_creator), _SINK, p.g_j),
            ]
        )
        self._arrivals += 1
        self._job_offers[offer_id] = JobOfferRecord(offer_id, self._arrivals, offer)
        self._history[offer_id] = [JobFsmState.OFFER_POSTED]
        self._open_offers[offer_id] = None
        return self._emit(
            EventKind.JOB_OFFER_POSTED,
            offer_id,
            job_creator=offer.job_creator,
            deposit=offer.deposit_value,
            estimate=offer.price_estimate,
        )

    def post_resource_offer(self, offer: ResourceOffer) -> LedgerEvent:
        self._require_role(offer.res_provider, Role.RESOURCE_PROVIDER)
        p = self.platform
        required = compute_min_deposit(offer.price_estimate, p.theta, p.n, p.pi_a)
        if offer.deposit_value < required:
            raise InsufficientDeposit(offer.deposit_value, required)
        self._require_balance(offer.res_provider, offer.deposit_value + p.g_r)

        self._resource_seq += 1
        offer_id = f"RO-{self._resource_seq:06d}"
        self._commit(
            [
                (_acct(offer.res_provider), _esc(offer_id), offer.deposit_value),
                (_acct(offer.res_provider), _SINK, p.g_r),
            ]
        )
        self._arrivals += 1
        self._resource_offers[offer_id] = ResourceOfferRecord(offer_id, self._arrivals, offer)
        self._open_offers[offer_id] = None
        return self._emit(
            EventKind.RESOURCE_OFFER_POSTED,
            offer_id,
            res_provider=offer.res_provider,
            deposit=offer.deposit_value,
        )

    def cancel_offer(self, offer_id: str, caller: AccountId) -> LedgerEvent:
        if offer_id in self._job_offers:
            jo_rec = self._job_offers[offer_id]
            owner, state = jo_rec.offer.job_creator, jo_rec.state
            kind = EventKind.JOB_OFFER_CANCELED
        elif offer_id in self._resource_offers:
            ro_rec = self._resource_offers[offer_id]
            owner, state = ro_rec.offer.res_provider, ro_rec.state
            kind = EventKind.RESOURCE_OFFER_CANCELED
        else:
            raise StaleOffer(f"unknown offer '{offer_id}'")
        if caller != owner:
            raise NotOwner(f"'{caller}' does not own offer '{offer_id}'")
        if state == JobFsmState.CANCELED:
            raise WrongState(offer_id, state.value, "cancel_offer")
        if state != JobFsmState.OFFER_POSTED:
            raise AlreadyMatched(f"offer '{offer_id}' is {state.value}; cancellation not permitted")

        refund = self._escrow[offer_id]
        del self._open_offers[offer_id]
        self._commit([(_esc(offer_id), _acct(owner), refund)])
        if kind == EventKind.JOB_OFFER_CANCELED:
            self._set_job_state(offer_id, JobFsmState.CANCELED)
        else:
            self._resource_offers[offer_id] = replace(ro_rec, state=JobFsmState.CANCELED)
        return self._emit(kind, offer_id, owner=owner, refund=refund)

    # --- Matching -----------------------------------------------------------

    def post_match(self, match: Match, solver: AccountId) -> LedgerEvent:
        self._require_role(solver, Role.SOLVER)
        jo_rec = self._job_offers.get(match.job_offer_id)
        ro_rec = self._resource_offers.get(match.resource_offer_id)
        if jo_rec is None or ro_rec is None:
            raise StaleOffer(
                f"unknown offers '{match.job_offer_id}' / '{match.resource_offer_id}'"
            )
        for rec in (jo_rec, ro_rec):
            if rec.state != JobFsmState.OFFER_POSTED:
                raise StaleOffer(f"offer '{rec.offer_id}' is {rec.state.value}")

        report = check_feasible(
            jo_rec.offer, ro_rec.offer, self._accounts, self._now_ms, self.platform
        )
        if not report.feasible:
            raise Infeasible(report.violations)
        if match.mediator not in report.eligible_mediators:
            raise Infeasible(["mediator"])

        jo, ro = jo_rec.offer, ro_rec.offer
        self._commit(
            [
                (_esc(jo_rec.offer_id), _acct(solver), jo.match_incentive),
                (_esc(ro_rec.offer_id), _acct(solver), ro.match_incentive),
            ]
        )
        del self._open_offers[jo_rec.offer_id]
        del self._open_offers[ro_rec.offer_id]
        self._match_seq += 1
        match_id = f"MA-{self._match_seq:06d}"
        stamped = match.model_copy(update={"match_time_ms": self._now_ms})
        self._matches[match_id] = MatchRecord(
            match_id=match_id,
            match=stamped,
            job_creator=jo.job_creator,
            res_provider=ro.res_provider,
            price_estimate=jo.price_estimate,
        )
        self._set_job_state(jo_rec.offer_id, JobFsmState.MATCHED, match_id)
        self._resource_offers[ro_rec.offer_id] = replace(
            ro_rec, state=JobFsmState.MATCHED, match_id=match_id
        )
        return self._emit(
            EventKind.MATCHED,
            match_id,
            job_offer=jo_rec.offer_id,
            resource_offer=ro_rec.offer_id,
            mediator=match.mediator,
            solver=solver,
            solver_paid=jo.match_incentive + ro.match_incentive,
        )

    # --- Results ------------------------------------------------------------

    def post_result(self, result: JobResult, caller: AccountId) -> LedgerEvent:
        rec = self._require_match(result.match_id)
        if caller != rec.res_provider:
            raise NotMatchedProvider(f"'{caller}' is not the provider of '{rec.match_id}'")
        self._require_state(rec, JobFsmState.MATCHED, "post_result")
        jo = self._job_offers[rec.match.job_offer_id].offer
        if self._now_ms > jo.completion_deadline_ms:
            raise PastDeadline(
                f"now {self._now_ms} ms is past the completion deadline "
                f"{jo.completion_deadline_ms} ms"
            )
        if result.status == ResultStatus.COMPLETED and not result.usage.fits_within(jo.limits):
            raise InvalidUsage("Completed result reports usage above the offer limits")

        stamped = result.model_copy(update={"timestamp_ms": self._now_ms})
        deadline = self._now_ms + self.platform.reaction_deadline_ms
        self._matches[rec.match_id] = replace(rec, result=stamped, reaction_deadline_ms=deadline)
        self._set_job_state(rec.match.job_offer_id, JobFsmState.RESULT_POSTED)
        return self._emit(
            EventKind.RESULT_POSTED,
            rec.match_id,
            status=result.status.value,
            result_hash=result.result_hash,
            reaction_deadline_ms=deadline,
        )

    def accept_result(self, match_id: str, caller: AccountId) -> LedgerEvent:
        rec = self._require_match(match_id)
        if caller == rec.res_provider:
            self._require_state(rec, JobFsmState.RESULT_POSTED, "accept_result")
            assert rec.reaction_deadline_ms is not None
            if self._now_ms <= rec.reaction_deadline_ms:
                raise ReactionWindowOpen(
                    f"reaction window of '{match_id}' open until {rec.reaction_deadline_ms} ms"
                )
        elif caller == rec.job_creator:
            self._require_state(rec, JobFsmState.RESULT_POSTED, "accept_result")
        else:
            raise NotParty(f"'{caller}' is not a party to '{match_id}'")

        price = self.job_price(rec)
        jo_id, ro_id = rec.match.job_offer_id, rec.match.resource_offer_id
        pi_a = self.platform.pi_a
        mediator = _acct(rec.match.mediator)
        self._commit(
            [
                (_esc(jo_id), _acct(rec.res_provider), price),
                (_esc(jo_id), mediator, pi_a),
                (_esc(ro_id), mediator, pi_a),
                (_esc(jo_id), _acct(rec.job_creator), self._escrow[jo_id] - price - pi_a),
                (_esc(ro_id), _acct(rec.res_provider), self._escrow[ro_id] - pi_a),
            ]
        )
        self._close(rec)
        return self._emit(
            EventKind.MATCH_CLOSED,
            match_id,
            outcome="accepted",
            accepted_by=caller,
            price=price,
        )

    def reject_result(
        self, match_id: str, caller: AccountId, reason: str = "WrongResults"
    ) -> LedgerEvent:
        rec = self._require_match(match_id)
        if caller != rec.job_creator:
            raise NotJobCreator(f"only the job creator of '{match_id}' may reject")
        self._require_state(rec, JobFsmState.RESULT_POSTED, "reject_result")
        g_m = self.platform.g_m
        self._require_balance(caller, g_m)

        self._commit([(_acct(caller), _SINK, g_m)])
        self._matches[match_id] = replace(
            rec, rejection_reason=reason, mediation_requested_ms=self._now_ms
        )
        self._set_job_state(rec.match.job_offer_id, JobFsmState.MEDIATION_REQUESTED)
        self._emit(EventKind.RESULT_REJECTED, match_id, reason=reason)
        return self._emit(
            EventKind.JOB_ASSIGNED_FOR_MEDIATION, match_id, mediator=rec.match.mediator
        )

    def post_mediation_result(self, mr: MediationResult, caller: AccountId) -> LedgerEvent:
        rec = self._require_match(mr.match_id)
        if caller != rec.match.mediator:
            raise NotAssignedMediator(f"'{caller}' is not the mediator of '{mr.match_id}'")
        self._require_state(rec, JobFsmState.MEDIATION_REQUESTED, "post_mediation_result")

        p = self.platform
        jo_id, ro_id = rec.match.job_offer_id, rec.match.resource_offer_id
        if mr.faulty_party == Party.JOB_CREATOR:
            faulty_esc, wronged_esc, wronged = jo_id, ro_id, rec.res_provider
        else:
            faulty_esc, wronged_esc, wronged = ro_id, jo_id, rec.job_creator
        mediator = _acct(rec.match.mediator)
        pi_d = self._pi_d(rec)
        pi_m = rec.price_estimate * p.n

        # Forfeited deposit pays out in priority order; whatever is left is burnt.
        transfers: list[_Transfer] = []
        remaining = self._escrow[faulty_esc]
        for dest, amount in ((mediator, p.pi_a), (_acct(wronged), pi_d), (mediator, pi_m)):
            paid = min(amount, remaining)
            transfers.append((_esc(faulty_esc), dest, paid))
            remaining -= paid
        transfers.append((_esc(faulty_esc), _SINK, remaining))
        transfers.append((_esc(wronged_esc), mediator, p.pi_a))
        transfers.append(
            (_esc(wronged_esc), _acct(wronged), self._escrow[wronged_esc] - p.pi_a)
        )
        self._commit(transfers)

        self._matches[mr.match_id] = replace(rec, mediation=mr)
        self._close(rec)
        self._emit(
            EventKind.MEDIATION_RESULT_POSTED,
            mr.match_id,
            verdict=mr.verdict.value,
            faulty_party=mr.faulty_party.value,
            non_deterministic=mr.non_deterministic,
        )
        return self._emit(
            EventKind.MATCH_CLOSED,
            mr.match_id,
            outcome="mediated",
            pi_d=pi_d,
            pi_m=pi_m,
            residual=remaining,
        )

    def timeout(self, match_id: str, caller: AccountId) -> LedgerEvent:
        rec = self._require_match(match_id)
        state = self.job_state(match_id)
        jo_id, ro_id = rec.match.job_offer_id, rec.match.resource_offer_id
        jc, rp = _acct(rec.job_creator), _acct(rec.res_provider)

        if state == JobFsmState.MATCHED:
            if caller != rec.job_creator:
                raise NotJobCreator(f"only the job creator of '{match_id}' may time it out")
            deadline = self._job_offers[jo_id].offer.completion_deadline_ms
            if self._now_ms <= deadline:
                raise DeadlineNotReached(f"completion deadline {deadline} ms not yet passed")
            compensation = min(rec.price_estimate, self._escrow[ro_id])
            self._commit(
                [
                    (_esc(ro_id), jc, compensation),
                    (_esc(ro_id), rp, self._escrow[ro_id] - compensation),
                    (_esc(jo_id), jc, self._escrow[jo_id]),
                ]
            )
            self._close(rec, JobFsmState.TIMED_OUT)
            return self._emit(EventKind.JOB_TIMED_OUT, match_id, compensation=compensation)

        if state == JobFsmState.MEDIATION_REQUESTED:
            if caller not in (rec.job_creator, rec.res_provider):
                raise NotParty(f"'{caller}' is not a party to '{match_id}'")
            assert rec.mediation_requested_ms is not None
            deadline = rec.mediation_requested_ms + self.platform.mediation_deadline_ms
            if self._now_ms <= deadline:
                raise DeadlineNotReached(f"mediation deadline {deadline} ms not yet passed")
            half = min(rec.price_estimate // 2, self._escrow[jo_id])
            self._commit(
                [
                    (_esc(jo_id), rp, half),
                    (_esc(jo_id), jc, self._escrow[jo_id] - half),
                    (_esc(ro_id), rp, self._escrow[ro_id]),
                ]
            )
            self._close(rec, JobFsmState.TIMED_OUT)
            return self._emit(EventKind.MEDIATION_TIMED_OUT, match_id, compensation=half)

        raise WrongState(match_id, state.value, "timeout")

    # --- Pricing helpers ----------------------------------------------------

    def job_price(self, rec: MatchRecord) -> Money:
        """π_c for a posted result; usage is billed up to the offer limits."""
        assert rec.result is not None
        jo = self._job_offers[rec.match.job_offer_id].offer
        ro = self._resource_offers[rec.match.resource_offer_id].offer
        usage = rec.result.usage.capped_by(jo.limits)
        return price_usage(usage, ro.instruction_price, ro.bandwidth_price)

    def _pi_d(self, rec: MatchRecord) -> Money:
        convention = self.platform.pi_d_convention
        if convention == PiDConvention.ESTIMATE:
            return rec.price_estimate
        if convention == PiDConvention.PENALTY:
            return rec.price_estimate * self.platform.theta
        if rec.result is None:
            return rec.price_estimate
        return self.job_price(rec)

    # --- Internals ----------------------------------------------------------

    def _require_role(self, account_id: AccountId, role: Role) -> None:
        account = self._accounts.get(account_id)
        if account is None or account.role != role:
            raise UnregisteredActor(account_id)

    def _require_balance(self, account_id: AccountId, required: Money) -> None:
        balance = self._balances.get(account_id, 0)
        if balance < required:
            raise InsufficientBalance(account_id, balance, required)

    def _require_match(self, match_id: str) -> MatchRecord:
        rec = self._matches.get(match_id)
        if rec is None:
            raise WrongState(match_id, "Unknown", "a match operation")
        return rec

    def _require_state(self, rec: MatchRecord, state: JobFsmState, operation: str) -> None:
        current = self._job_offers[rec.match.job_offer_id].state
        if current != state:
            raise WrongState(rec.match_id, current.value, operation)

    def _set_job_state(
        self, offer_id: str, state: JobFsmState, match_id: str | None = None
    ) -> None:
        rec = self._job_offers[offer_id]
        if state not in JOB_TRANSITIONS[rec.state]:
            raise WrongState(offer_id, rec.state.value, f"transition to {state.value}")
        self._job_offers[offer_id] = replace(rec, state=state, match_id=match_id or rec.match_id)
        self._history[offer_id].append(state)

    def _close(self, rec: MatchRecord, state: JobFsmState = JobFsmState.CLOSED) -> None:
        self._set_job_state(rec.match.job_offer_id, state)
        ro_id = rec.match.resource_offer_id
        self._resource_offers[ro_id] = replace(self._resource_offers[ro_id], state=state)
        for offer_id in (rec.match.job_offer_id, ro_id):
            if self._escrow.get(offer_id) == 0:
                del self._escrow[offer_id]

    def _read(self, key: _Key) -> Money:
        kind, ident = key
        return self._balances.get(ident, 0) if kind == "account" else self._escrow.get(ident, 0)

    def _commit(self, transfers: list[_Transfer]) -> None:
        """Apply transfers all-or-nothing."""
        deltas: dict[_Key, Money] = defaultdict(int)
        for src, dst, amount in transfers:
            if amount < 0:
                raise ValueError(f"negative transfer {amount} from {src} to {dst}")
            deltas[src] -= amount
            deltas[dst] += amount

        updated: dict[_Key, Money] = {}
        for key, delta in deltas.items():
            value = self._read(key) + delta
            if value < 0:
                raise InsufficientBalance(key[1], self._read(key), -delta)
            if value > INT64_MAX:
                raise MoneyOverflow(f"{key[0]} '{key[1]}' would exceed the 64-bit range")
            updated[key] = value

        for (kind, ident), value in updated.items():
            if kind == "account":
                self._balances[ident] = value
            else:
                self._escrow[ident] = value
        self._sealed = True
        logger.debug("committed %d transfers at block %d", len(transfers), self._block)

    def _emit(self, kind: EventKind, subject_id: str, **fields: object) -> LedgerEvent:
        event = LedgerEvent(
            block=self._block,
            index=self._block_index,
            kind=kind,
            subject_id=subject_id,
            fields=tuple((k, _fmt(v)) for k, v in fields.items()),
        )
        self._block_index += 1
        self._events.append(event)
        logger.debug("event %s %s at block %d", kind.value, subject_id, self._block)
        return event


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
