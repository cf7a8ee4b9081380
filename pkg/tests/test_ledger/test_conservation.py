"""Property tests: money conservation and state-machine validity under random call sequences."""

from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from compute_market.exceptions import LedgerError
from compute_market.ledger.contract import Ledger
from compute_market.ledger.types import (
    JOB_TRANSITIONS,
    JobFsmState,
    JobResult,
    MediationResult,
    Party,
    PlatformParams,
    ResourceVector,
    ResultStatus,
    Verdict,
)
from compute_market.matching.solver import greedy_match
from tests.factories import (
    JC,
    MEDIATOR,
    RP,
    SOLVER,
    START_BALANCE,
    job_offer,
    market_accounts,
    resource_offer,
)

ACTIONS = (
    "post_job",
    "post_resource",
    "cancel",
    "match",
    "result",
    "accept_jc",
    "accept_rp",
    "reject",
    "mediate",
    "timeout",
    "tick",
)


def _is_path(history: list[JobFsmState]) -> bool:
    if history[0] != JobFsmState.OFFER_POSTED:
        return False
    return all(b in JOB_TRANSITIONS[a] for a, b in zip(history, history[1:], strict=False))


def _step(ledger: Ledger, action: str, data: st.DataObject, clock: list[int]) -> None:
    matches = sorted(ledger.snapshot().matches)
    pick = data.draw(st.sampled_from(matches)) if matches else None
    if action == "post_job":
        deposit = data.draw(st.integers(min_value=515, max_value=700))
        ledger.post_job_offer(job_offer(deposit_value=deposit))
    elif action == "post_resource":
        ledger.post_resource_offer(resource_offer(deposit_value=data.draw(st.integers(515, 700))))
    elif action == "cancel":
        offers = sorted(ledger.snapshot().job_offers)
        if offers:
            ledger.cancel_offer(data.draw(st.sampled_from(offers)), JC)
    elif action == "match":
        found = greedy_match(
            ledger.pending_job_offers(),
            ledger.pending_resource_offers(),
            ledger.accounts,
            ledger.now_ms,
            ledger.platform,
        )
        if found:
            ledger.post_match(found[0], SOLVER)
    elif pick is None:
        return
    elif action == "result":
        status = data.draw(st.sampled_from(list(ResultStatus)))
        usage = ResourceVector(
            instruction_count=data.draw(st.integers(0, 8)), bandwidth=data.draw(st.integers(0, 4))
        )
        ledger.post_result(JobResult(match_id=pick, status=status, usage=usage), RP)
    elif action == "accept_jc":
        ledger.accept_result(pick, JC)
    elif action == "accept_rp":
        ledger.accept_result(pick, RP)
    elif action == "reject":
        ledger.reject_result(pick, JC)
    elif action == "mediate":
        faulty = data.draw(st.sampled_from(list(Party)))
        verdict = Verdict.CORRECT_RESULTS if faulty == Party.JOB_CREATOR else Verdict.WRONG_RESULTS
        ledger.post_mediation_result(
            MediationResult(match_id=pick, verdict=verdict, faulty_party=faulty), MEDIATOR
        )
    elif action == "timeout":
        ledger.timeout(pick, data.draw(st.sampled_from([JC, RP])))
    elif action == "tick":
        clock[0] += 1
        clock[1] += data.draw(st.sampled_from([10_000, 200_000]))
        ledger.advance(clock[0], clock[1])


class TestConservation:
    @given(
        data=st.data(),
        actions=st.lists(st.sampled_from(ACTIONS), min_size=1, max_size=40),
        fees=st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5)),
    )
    @settings(
        max_examples=150,
        suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
    )
    def test_residual_zero_and_histories_valid(self, data, actions, fees):
        g_j, g_r, g_m = fees
        platform = PlatformParams(theta=50, n=2, pi_a=1, g_j=g_j, g_r=g_r, g_m=g_m)
        ledger = Ledger.genesis(platform, [(a, START_BALANCE) for a in market_accounts()])
        clock = [0, 0]
        for action in actions:
            before = ledger.snapshot()
            try:
                _step(ledger, action, data, clock)
            except LedgerError:
                after = ledger.snapshot()
                assert dict(after.balances) == dict(before.balances)
                assert dict(after.escrow) == dict(before.escrow)
                assert after.events == before.events
            assert ledger.conservation_residual() == 0
            assert all(v >= 0 for v in ledger.snapshot().balances.values())

        for offer_id in ledger.snapshot().job_offers:
            assert _is_path(ledger.job_history(offer_id))
