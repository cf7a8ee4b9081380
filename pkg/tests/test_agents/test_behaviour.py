"""Tests for compute_market.agents.behaviour: RP and JC decisions."""

from __future__ import annotations

import pytest

from compute_market.agents.behaviour import (
    JcDecision,
    JcStrategy,
    PrivateAccount,
    PrivateCosts,
    Reaction,
    RpStrategy,
    jc_react,
    rp_act,
)
from compute_market.agents.jobs import JobSpec
from compute_market.agents.rng import RngStream
from compute_market.ledger.types import JobResult, ResourceVector, ResultStatus

PROFILE = ResourceVector(instruction_count=4, bandwidth=2)
COSTS = PrivateCosts(b=15, c_e=5, c_d=0.5, c_v=2)


def _spec(p_a: float = 1.0, job_id: str = "jc-0#0") -> JobSpec:
    return JobSpec(job_id=job_id, p_a=p_a, resource_profile=PROFILE)


def _result(result_hash: str) -> JobResult:
    return JobResult(match_id="MA-000001", status=ResultStatus.COMPLETED, result_hash=result_hash)


class TestPrivateAccount:
    def test_totals(self):
        account = PrivateAccount()
        account.charge("c_e", 5)
        account.charge("c_e", 5)
        account.charge("c_v", 2)
        account.credit(15)
        assert account.costs == {"c_e": 10, "c_v": 2}
        assert account.total_cost == 12
        assert account.net == 3

    def test_zero_charge_not_recorded(self):
        account = PrivateAccount()
        account.charge("c_d", 0.0)
        assert account.costs == {}


class TestRpAct:
    def test_executes(self):
        spec = _spec()
        account = PrivateAccount()
        rng = RngStream(0, "rp", "j", "rp")
        out = rp_act(RpStrategy(p_e=1.0), spec, "MA-1", rng, account, COSTS)
        assert out.executed and out.is_normal
        assert out.result is not None
        assert out.result.result_hash == spec.true_result_hash
        assert out.result.status == ResultStatus.COMPLETED
        assert out.result.usage == PROFILE
        assert account.costs == {"c_e": 5}

    def test_forges(self):
        spec = _spec()
        account = PrivateAccount()
        rng = RngStream(0, "rp", "j", "rp")
        out = rp_act(RpStrategy(p_e=0.0), spec, "MA-1", rng, account, COSTS)
        assert not out.executed
        assert out.result is not None
        assert out.result.result_hash != spec.true_result_hash
        assert not spec.is_anomalous(out.result.result_hash)
        assert account.costs == {"c_d": 0.5}

    def test_unresponsive(self):
        account = PrivateAccount()
        out = rp_act(
            RpStrategy(p_unresponsive=1.0),
            _spec(),
            "MA-1",
            RngStream(0, "rp", "j", "rp"),
            account,
            COSTS,
        )
        assert out.result is None
        assert account.total_cost == 0

    def test_execute_fraction(self):
        account = PrivateAccount()
        executed = 0
        for i in range(10_000):
            rng = RngStream(1, "rp", f"j{i}", "rp")
            executed += rp_act(RpStrategy(p_e=0.5), _spec(), "MA-1", rng, account, COSTS).executed
        assert executed / 10_000 == pytest.approx(0.5, abs=0.02)
        assert account.costs["c_e"] == pytest.approx(5 * executed)


class TestJcReact:
    def test_pass_always_accepts(self):
        spec = _spec()
        account = PrivateAccount()
        forged = _result(spec.forged_hash(0))
        for i in range(100):
            decision = jc_react(
                JcStrategy(p_v=0.0), spec, forged, RngStream(0, "jc", f"j{i}", "jc"), account, COSTS
            )
            assert decision.reaction == Reaction.ACCEPT
            assert not decision.verified
        assert account.total_cost == 0

    def test_verify_rejects_forgery(self):
        spec = _spec()
        account = PrivateAccount()
        decision = jc_react(
            JcStrategy(p_v=1.0),
            spec,
            _result(spec.forged_hash(3)),
            RngStream(0, "jc", "j", "jc"),
            account,
            COSTS,
        )
        assert decision.reaction == Reaction.REJECT
        assert decision.verified
        assert account.costs == {"c_v": 2}

    def test_verify_accepts_true_result(self):
        spec = _spec()
        decision = jc_react(
            JcStrategy(p_v=1.0),
            spec,
            _result(spec.true_result_hash),
            RngStream(0, "jc", "j", "jc"),
            PrivateAccount(),
            COSTS,
        )
        assert decision.reaction == Reaction.ACCEPT
        assert decision.verified

    @pytest.mark.parametrize(
        ("reject_on_anomaly", "expected"), [(True, Reaction.REJECT), (False, Reaction.ACCEPT)]
    )
    def test_anomalous_result(self, reject_on_anomaly, expected):
        spec = _spec(0.5)
        decision = jc_react(
            JcStrategy(p_v=1.0, reject_on_anomaly=reject_on_anomaly),
            spec,
            _result(spec.anomalous_hash(1)),
            RngStream(0, "jc", "j", "jc"),
            PrivateAccount(),
            COSTS,
        )
        assert decision.reaction == expected

    def test_undetected_forgery_is_accepted(self):
        spec = _spec()
        decision = jc_react(
            JcStrategy(p_v=1.0, detection_probability=0.0),
            spec,
            _result(spec.forged_hash(0)),
            RngStream(0, "jc", "j", "jc"),
            PrivateAccount(),
            COSTS,
        )
        assert decision == JcDecision(Reaction.ACCEPT, verified=True)

    def test_ignore(self):
        decision = jc_react(
            JcStrategy(p_v=1.0, p_ignore=1.0),
            _spec(),
            _result("whatever"),
            RngStream(0, "jc", "j", "jc"),
            PrivateAccount(),
            COSTS,
        )
        assert decision.reaction == Reaction.IGNORE
        assert not decision.verified

    def test_reject_fraction_against_honest_rp(self):
        rejects = 0
        for i in range(10_000):
            spec = _spec(0.9, job_id=f"jc-0#{i}")
            rp_rng = RngStream(8, "rp", spec.job_id, "rp")
            out = rp_act(RpStrategy(p_e=1.0), spec, "MA-1", rp_rng, PrivateAccount(), COSTS)
            assert out.result is not None
            jc_rng = RngStream(8, "jc", spec.job_id, "jc")
            strategy = JcStrategy(p_v=1.0)
            decision = jc_react(strategy, spec, out.result, jc_rng, PrivateAccount(), COSTS)
            rejects += decision.reaction == Reaction.REJECT
        assert rejects / 10_000 == pytest.approx(0.1, abs=0.015)
