"""Tests for compute_market.sim.clock."""

from __future__ import annotations

import pytest

from compute_market.exceptions import InsufficientDeposit
from compute_market.ledger.calls import PostJobOffer, PostResourceOffer
from compute_market.ledger.types import EventKind
from compute_market.sim.clock import BlockClock
from tests.factories import job_offer, resource_offer


class TestBlockClock:
    def test_calls_take_effect_next_block(self, ledger):
        clock = BlockClock(ledger, 10_000)
        clock.submit(PostJobOffer(job_offer()), tag="a")
        clock.submit(PostResourceOffer(resource_offer()), tag="b")
        assert clock.pending == 2
        assert not ledger.pending_job_offers()

        applied = clock.tick()
        assert clock.block == 1
        assert clock.now_ms == 10_000
        assert clock.pending == 0
        assert [a.tag for a in applied] == ["a", "b"]
        assert [a.event.kind for a in applied] == [
            EventKind.JOB_OFFER_POSTED,
            EventKind.RESOURCE_OFFER_POSTED,
        ]
        assert all(a.event.block == 1 for a in applied)
        assert [a.event.index for a in applied] == [0, 1]

    def test_rejected_call_is_reported(self, ledger):
        clock = BlockClock(ledger, 10_000)
        clock.submit(PostJobOffer(job_offer(deposit_value=1)), tag="cheap")
        clock.submit(PostJobOffer(job_offer()), tag="ok")
        bad, good = clock.tick()
        assert not bad.ok
        assert isinstance(bad.error, InsufficientDeposit)
        assert bad.event is None
        assert good.ok
        assert ledger.conservation_residual() == 0

    def test_empty_tick(self, ledger):
        clock = BlockClock(ledger, 500)
        assert clock.tick() == []
        assert clock.now_ms == 500

    def test_wait_until(self, ledger):
        clock = BlockClock(ledger, 10_000)
        assert clock.wait_until(25_000) == 3
        assert clock.now_ms == 30_000
        assert clock.wait_until(10_000) == 0

    def test_wait_until_needs_empty_buffer(self, ledger):
        clock = BlockClock(ledger, 10_000)
        clock.submit(PostJobOffer(job_offer()))
        with pytest.raises(RuntimeError):
            clock.wait_until(50_000)
