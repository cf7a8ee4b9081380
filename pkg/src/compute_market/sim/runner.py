"""Deterministic market simulation.

Each JC runs its jobs one after another: post an offer, wait for the solver
to match it, let the RP act, react to the result and, if it rejects, wait
for the mediator. RPs keep one resource offer open while there is demand.
Agents decide once per block; their calls take effect at the next block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from compute_market.agents.behaviour import (
    JcDecision,
    PrivateAccount,
    Reaction,
    RpOutput,
    jc_react,
    rp_act,
)
from compute_market.agents.jobs import JobSpec
from compute_market.agents.mediator import mediate
from compute_market.agents.rng import RngStream
from compute_market.game.outcomes import Outcome, outcome_probabilities
from compute_market.game.params import GameParams
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
from compute_market.ledger.contract import Ledger
from compute_market.ledger.pricing import compute_min_deposit, price_usage
from compute_market.ledger.types import (
    Account,
    JobFsmState,
    JobOffer,
    LedgerEvent,
    MediationResult,
    Party,
    PiDConvention,
    ResourceOffer,
    Role,
)
from compute_market.matching.solver import solve
from compute_market.sim.clock import Applied, BlockClock
from compute_market.sim.metrics import AgentTotals, Metrics
from compute_market.sim.scenario import (
    JobCreatorConfig,
    ResourceProviderConfig,
    ScenarioConfig,
)

logger = logging.getLogger(__name__)

_IN_FLIGHT = "<in-flight>"


def job_offer_for(jc: JobCreatorConfig, config: ScenarioConfig, now_ms: int) -> JobOffer:
    template = jc.job
    offer = JobOffer(
        job_creator=jc.id,
        limits=template.limits,
        instruction_max_price=template.instruction_max_price,
        bandwidth_max_price=template.bandwidth_max_price,
        completion_deadline_ms=now_ms + template.deadline_ms,
        match_incentive=template.match_incentive,
        directory=template.directory,
        arch=template.arch,
        deposit_value=0,
    )
    deposit = template.deposit
    if deposit is None:
        p = config.platform
        minimum = compute_min_deposit(offer.price_estimate, p.theta, p.n, p.pi_a)
        deposit = minimum + template.match_incentive
    return offer.model_copy(update={"deposit_value": deposit})


def resource_offer_for(rp: ResourceProviderConfig, config: ScenarioConfig) -> ResourceOffer:
    offer = ResourceOffer(
        res_provider=rp.id,
        capacities=rp.capacities,
        instruction_price=rp.instruction_price,
        bandwidth_price=rp.bandwidth_price,
        deposit_value=0,
    )
    deposit = rp.deposit
    if deposit is None:
        p = config.platform
        deposit = compute_min_deposit(offer.price_estimate, p.theta, p.n, p.pi_a)
    return offer.model_copy(update={"deposit_value": deposit})


def scenario_game_params(config: ScenarioConfig) -> GameParams:
    """Game parameters implied by the first JC and RP of a scenario.

    d is what the JC still has in escrow after the match incentive, net of
    the availability fee.
    """
    jc = config.job_creators[0]
    rp = config.resource_providers[0]
    p = config.platform
    offer = job_offer_for(jc, config, 0)
    pi_c = price_usage(jc.job.limits, rp.instruction_price, rp.bandwidth_price)
    pi_c_hat = offer.price_estimate
    pi_d = {
        PiDConvention.ACTUAL: pi_c,
        PiDConvention.ESTIMATE: pi_c_hat,
        PiDConvention.PENALTY: pi_c_hat * p.theta,
    }[p.pi_d_convention]
    return GameParams(
        theta=p.theta,
        n=p.n,
        d=offer.deposit_value - offer.match_incentive - p.pi_a,
        pi_c=pi_c,
        pi_c_hat=pi_c_hat,
        pi_r=pi_c,
        pi_d=pi_d,
        pi_m=pi_c_hat * p.n,
        pi_a=p.pi_a,
        g_j=p.g_j,
        g_r=p.g_r,
        g_m=p.g_m,
        b=jc.costs.b,
        c_v=jc.costs.c_v,
        c_e=rp.costs.c_e,
        c_d=rp.costs.c_d,
        p_a=jc.strategy.p_a,
        p_e=rp.strategy.p_e,
        p_v=jc.strategy.p_v,
        enforce_constraints=False,
    )


@dataclass
class JobTrack:
    """Progress of one JC job round through the protocol."""

    job_id: str
    jc_id: str
    spec: JobSpec
    posted_block: int
    job_offer_id: str | None = None
    match_id: str | None = None
    rp_id: str | None = None
    mediator_id: str | None = None
    rp_output: RpOutput | None = None
    rp_silent: bool = False
    decision: JcDecision | None = None
    mediator_silent: bool | None = None
    mediation: MediationResult | None = None
    awaiting: bool = False
    canceling: bool = False


@dataclass(frozen=True)
class SimulationResult:
    metrics: Metrics
    events: tuple[LedgerEvent, ...]
    ledger: Ledger
    game_params: GameParams | None


class MarketRun:
    def __init__(self, config: ScenarioConfig, seed: int | None = None):
        self.config = config
        self.seed = config.seed if seed is None else seed
        self.metrics = Metrics()

        self._jcs = {jc.id: jc for jc in config.job_creators}
        self._rps = {rp.id: rp for rp in config.resource_providers}
        self._mediators = {m.id: m for m in config.mediators}
        self._private = {agent_id: PrivateAccount() for agent_id in [*self._jcs, *self._rps]}

        funded = self._accounts()
        self._opening = {account.account_id: balance for account, balance in funded}
        self.ledger = Ledger.genesis(config.platform, funded)
        self.clock = BlockClock(self.ledger, config.block_interval_ms)

        self._rounds_left = {jc_id: config.job_count for jc_id in self._jcs}
        self._rounds_started = dict.fromkeys(self._jcs, 0)
        self._jc_track: dict[str, JobTrack | None] = dict.fromkeys(self._jcs)
        self._tracks_by_jo: dict[str, JobTrack] = {}
        self._tracks_by_match: dict[str, JobTrack] = {}
        self._rp_offer: dict[str, str | None] = dict.fromkeys(self._rps)
        self._rp_match: dict[str, str | None] = dict.fromkeys(self._rps)
        self._retired_rps: set[str] = set()
        self._offers_in_flight: set[str] = set()

    def _accounts(self) -> list[tuple[Account, int]]:
        c = self.config
        funded = [(Account(account_id=c.solver_id, role=Role.SOLVER), 0)]
        for m in c.mediators:
            account = Account(
                account_id=m.id,
                role=Role.MEDIATOR,
                arch=m.arch,
                trusted_directories=frozenset(m.trusted_directories),
            )
            funded.append((account, m.balance))
        for jc in c.job_creators:
            account = Account(
                account_id=jc.id,
                role=Role.JOB_CREATOR,
                arch=jc.arch,
                trusted_mediators=frozenset(jc.trusted_mediators),
                trusted_directories=frozenset(jc.trusted_directories),
            )
            funded.append((account, jc.balance))
        for rp in c.resource_providers:
            account = Account(
                account_id=rp.id,
                role=Role.RESOURCE_PROVIDER,
                arch=rp.arch,
                trusted_mediators=frozenset(rp.trusted_mediators),
                trusted_directories=frozenset(rp.trusted_directories),
                time_per_instruction_us=rp.time_per_instruction_us,
            )
            funded.append((account, rp.balance))
        return funded

    def _rng(self, agent: str, job: str, purpose: str) -> RngStream:
        return RngStream(self.seed, agent, job, purpose)

    # --- Main loop ------------------------------------------------------------

    def run(self) -> SimulationResult:
        logger.info(
            "running scenario: %d JCs x %d jobs, seed %d",
            len(self._jcs),
            self.config.job_count,
            self.seed,
        )
        while True:
            self._plan()
            if not self._busy():
                break
            self._settle(self.clock.tick())
        self._withdraw_resource_offers()
        self._finish()
        logger.info(
            "scenario done after %d blocks: %d matches, %d mediations",
            self.metrics.blocks,
            self.metrics.matches,
            self.metrics.mediations,
        )
        predictions = None
        if self.config.job_creators and self.config.resource_providers:
            predictions = scenario_game_params(self.config)
            self.metrics.predicted_outcomes = outcome_probabilities(predictions)
        return SimulationResult(self.metrics, self.ledger.events, self.ledger, predictions)

    def _busy(self) -> bool:
        return (
            self.clock.pending > 0
            or any(t is not None for t in self._jc_track.values())
            or any(self._rounds_left.values())
        )

    def _demand(self) -> bool:
        return any(self._rounds_left.values()) or any(
            t is not None and t.match_id is None for t in self._jc_track.values()
        )

    # --- Decisions for the current block -----------------------------------------

    def _plan(self) -> None:
        self._post_job_offers()
        self._post_resource_offers()
        self._match_and_expire()
        for match_id in sorted(self._tracks_by_match):
            track = self._tracks_by_match[match_id]
            if not track.awaiting:
                self._advance_match(track)

    def _post_job_offers(self) -> None:
        now = self.clock.now_ms
        for jc_id, jc in self._jcs.items():
            if self._jc_track[jc_id] is not None or self._rounds_left[jc_id] == 0:
                continue
            round_index = self._rounds_started[jc_id]
            self._rounds_started[jc_id] += 1
            self._rounds_left[jc_id] -= 1
            job_id = f"{jc_id}#{round_index}"
            spec = JobSpec(
                job_id=job_id,
                p_a=jc.strategy.p_a,
                anomaly_seed=self.seed,
                resource_profile=jc.job.limits,
            )
            offer = job_offer_for(jc, self.config, now).model_copy(update={"job_hash": job_id})
            track = JobTrack(job_id=job_id, jc_id=jc_id, spec=spec, posted_block=self.clock.block)
            track.awaiting = True
            self._jc_track[jc_id] = track
            self.clock.submit(PostJobOffer(offer), tag=jc_id)
            self.metrics.jobs_posted += 1

    def _post_resource_offers(self) -> None:
        if not self._demand():
            return
        for rp_id, rp in self._rps.items():
            if rp_id in self._retired_rps:
                continue
            if self._rp_offer[rp_id] is None and self._rp_match[rp_id] is None:
                self._rp_offer[rp_id] = _IN_FLIGHT
                self.clock.submit(PostResourceOffer(resource_offer_for(rp, self.config)), tag=rp_id)

    def _match_and_expire(self) -> None:
        ledger = self.ledger
        jobs = [r for r in ledger.pending_job_offers() if r.offer_id not in self._offers_in_flight]
        resources = [
            r for r in ledger.pending_resource_offers() if r.offer_id not in self._offers_in_flight
        ]
        if jobs and resources:
            matches = solve(
                self.config.solver_mode,
                jobs,
                resources,
                ledger.accounts,
                ledger.now_ms,
                ledger.platform,
            )
            for match in matches:
                self._offers_in_flight.update((match.job_offer_id, match.resource_offer_id))
                self.clock.submit(PostMatch(match, self.config.solver_id), tag=match.job_offer_id)

        patience = self.config.match_patience_blocks
        for record in jobs:
            track = self._tracks_by_jo.get(record.offer_id)
            if track is None or track.canceling or record.offer_id in self._offers_in_flight:
                continue
            if self.clock.block - track.posted_block >= patience:
                track.canceling = True
                self._offers_in_flight.add(record.offer_id)
                self.clock.submit(CancelOffer(record.offer_id, track.jc_id), tag=record.offer_id)

    def _advance_match(self, track: JobTrack) -> None:
        assert track.match_id is not None and track.rp_id is not None
        match_id = track.match_id
        state = self.ledger.job_state(match_id)
        now = self.clock.now_ms
        record = self.ledger.match(match_id)

        if state == JobFsmState.MATCHED:
            if track.rp_output is None and not track.rp_silent:
                output = rp_act(
                    self._rps[track.rp_id].strategy,
                    track.spec,
                    match_id,
                    self._rng(track.rp_id, track.job_id, "rp"),
                    self._private[track.rp_id],
                    self._rps[track.rp_id].costs,
                )
                if output.result is None:
                    track.rp_silent = True
                    return
                track.rp_output = output
                self._submit(track, PostResult(output.result, track.rp_id))
            elif track.rp_silent:
                offer = self.ledger.job_offer(record.match.job_offer_id).offer
                if now > offer.completion_deadline_ms:
                    self._submit(track, Timeout(match_id, track.jc_id))

        elif state == JobFsmState.RESULT_POSTED:
            if track.decision is None:
                assert record.result is not None
                jc = self._jcs[track.jc_id]
                decision = jc_react(
                    jc.strategy,
                    track.spec,
                    record.result,
                    self._rng(track.jc_id, track.job_id, "jc"),
                    self._private[track.jc_id],
                    jc.costs,
                )
                track.decision = decision
                self.metrics.results_reacted += 1
                self.metrics.verifications += decision.verified
                if decision.reaction == Reaction.ACCEPT:
                    self._submit(track, AcceptResult(match_id, track.jc_id))
                elif decision.reaction == Reaction.REJECT:
                    self._submit(track, RejectResult(match_id, track.jc_id))
            elif track.decision.reaction == Reaction.IGNORE:
                assert record.reaction_deadline_ms is not None
                if now > record.reaction_deadline_ms:
                    self._submit(track, AcceptResult(match_id, track.rp_id))

        elif state == JobFsmState.MEDIATION_REQUESTED:
            assert track.mediator_id is not None
            mediator = self._mediators[track.mediator_id]
            if track.mediator_silent is None:
                availability = self._rng(mediator.id, track.job_id, "availability")
                track.mediator_silent = availability.bernoulli(mediator.p_unresponsive)
            if not track.mediator_silent:
                assert record.result is not None
                result = mediate(
                    track.spec,
                    record.result.result_hash,
                    match_id,
                    self.config.platform.n,
                    self._rng(mediator.id, track.job_id, "mediate"),
                )
                track.mediation = result
                self._submit(track, PostMediationResult(result, mediator.id))
            else:
                assert record.mediation_requested_ms is not None
                window = self.config.platform.mediation_deadline_ms
                deadline = record.mediation_requested_ms + window
                if now > deadline:
                    self._submit(track, Timeout(match_id, track.rp_id))

    def _submit(self, track: JobTrack, call: LedgerCall) -> None:
        track.awaiting = True
        self.clock.submit(call, tag=track.job_id)

    # --- Applying the block's results -------------------------------------------

    def _settle(self, applied: list[Applied]) -> None:
        for item in applied:
            if item.ok:
                self._on_success(item)
            else:
                self._on_failure(item)

    def _on_success(self, item: Applied) -> None:
        call, event = item.call, item.event
        assert event is not None
        match call:
            case PostJobOffer():
                track = self._jc_track[item.tag]
                assert track is not None
                track.job_offer_id = event.subject_id
                track.awaiting = False
                self._tracks_by_jo[event.subject_id] = track
            case PostResourceOffer():
                self._rp_offer[item.tag] = event.subject_id
            case PostMatch(match=match):
                self._offers_in_flight.difference_update(
                    (match.job_offer_id, match.resource_offer_id)
                )
                rp_id = self.ledger.resource_offer(match.resource_offer_id).offer.res_provider
                self._rp_offer[rp_id] = None
                self._rp_match[rp_id] = event.subject_id
                track = self._tracks_by_jo.pop(match.job_offer_id)
                track.match_id = event.subject_id
                track.rp_id = rp_id
                track.mediator_id = match.mediator
                self._tracks_by_match[event.subject_id] = track
                self.metrics.matches += 1
            case CancelOffer(offer_id=offer_id):
                self._offers_in_flight.discard(offer_id)
                track = self._tracks_by_jo.pop(offer_id, None)
                if track is not None:
                    self._jc_track[track.jc_id] = None
                    self.metrics.jobs_unmatched += 1
            case RejectResult():
                self.metrics.mediations += 1
                self._tracks_by_match[event.subject_id].awaiting = False
            case AcceptResult() | PostMediationResult():
                self._close(self._tracks_by_match[event.subject_id], timed_out=False)
            case Timeout():
                self._close(self._tracks_by_match[event.subject_id], timed_out=True)
            case PostResult():
                track = self._tracks_by_match[event.subject_id]
                track.awaiting = False
                if track.rp_output is not None and track.rp_output.executed:
                    self._private[track.jc_id].credit(self._jcs[track.jc_id].costs.b)

    def _on_failure(self, item: Applied) -> None:
        call, error = item.call, item.error
        assert error is not None
        self.metrics.aborted_rounds[error.code] += 1
        logger.warning("aborted %s (%s): %s", type(call).__name__, item.tag, error)
        match call:
            case PostJobOffer():
                self._jc_track[item.tag] = None
            case PostResourceOffer():
                self._rp_offer[item.tag] = None
                self._retired_rps.add(item.tag)
            case PostMatch(match=match):
                self._offers_in_flight.difference_update(
                    (match.job_offer_id, match.resource_offer_id)
                )
            case CancelOffer(offer_id=offer_id):
                self._offers_in_flight.discard(offer_id)
                track = self._tracks_by_jo.pop(offer_id, None)
                if track is not None:
                    self._jc_track[track.jc_id] = None
            case _:
                track = self._tracks_by_match.get(_match_id_of(call))
                if track is not None:
                    self._recover(track, call)

    def _recover(self, track: JobTrack, call: LedgerCall) -> None:
        """Fall back to the deadline path after a rejected match-level call.

        The job stays open until a timeout or the RP's late accept closes it.
        Only a rejected closing call drops the track.
        """
        track.awaiting = False
        match call:
            case PostResult():
                track.rp_silent = True
            case AcceptResult(caller=caller) | RejectResult(caller=caller) if (
                caller == track.jc_id and track.decision is not None
            ):
                track.decision = JcDecision(Reaction.IGNORE, track.decision.verified)
            case PostMediationResult():
                track.mediator_silent = True
            case _:
                self._release(track)

    def _close(self, track: JobTrack, timed_out: bool) -> None:
        if timed_out:
            self.metrics.jobs_timed_out += 1
        else:
            self.metrics.jobs_closed += 1
            outcome = classify(track)
            if outcome is None:
                self.metrics.unclassified += 1
            else:
                self.metrics.outcomes[outcome] += 1
        self._release(track)

    def _release(self, track: JobTrack) -> None:
        assert track.match_id is not None and track.rp_id is not None
        self._tracks_by_match.pop(track.match_id, None)
        self._jc_track[track.jc_id] = None
        self._rp_match[track.rp_id] = None

    # --- Wrap-up --------------------------------------------------------------

    def _withdraw_resource_offers(self) -> None:
        for rp_id, offer_id in self._rp_offer.items():
            if offer_id is not None and offer_id != _IN_FLIGHT:
                self.clock.submit(CancelOffer(offer_id, rp_id), tag=rp_id)
        if self.clock.pending:
            for item in self.clock.tick():
                if item.ok:
                    self._rp_offer[item.tag] = None
                else:
                    assert item.error is not None
                    self.metrics.aborted_rounds[item.error.code] += 1

    def _finish(self) -> None:
        m = self.metrics
        m.blocks = self.ledger.block
        m.conservation_residual = self.ledger.conservation_residual()
        for account_id, opening in self._opening.items():
            totals = AgentTotals(ledger_delta=self.ledger.balance(account_id) - opening)
            private = self._private.get(account_id)
            if private is not None:
                totals.private_cost = private.total_cost
                totals.private_benefit = private.benefit
            m.agents[account_id] = totals


def _match_id_of(call: LedgerCall) -> str:
    match call:
        case PostResult(result=result) | PostMediationResult(result=result):
            return result.match_id
        case AcceptResult(match_id=match_id) | RejectResult(match_id=match_id):
            return match_id
        case Timeout(match_id=match_id):
            return match_id
    raise TypeError(f"not a match-level call: {call!r}")


def classify(track: JobTrack) -> Outcome | None:
    """Map a closed job onto a leaf of the game tree, if it corresponds to one."""
    output, decision = track.rp_output, track.decision
    if output is None or decision is None:
        return None
    executed = output.executed
    if track.mediation is not None:
        if track.mediation.faulty_party == Party.JOB_CREATOR:
            return Outcome.O6 if executed else Outcome.O1
        return Outcome.O7 if executed else Outcome.O2
    if not decision.verified:
        return Outcome.O4 if executed else Outcome.O3
    if executed and output.is_normal:
        return Outcome.O5
    return None


def run_scenario(config: ScenarioConfig, seed: int | None = None) -> SimulationResult:
    """Run every job round of ``config``; ``seed`` overrides the scenario's seed."""
    return MarketRun(config, seed).run()
