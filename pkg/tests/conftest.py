"""Shared test fixtures for compute-market tests."""

from __future__ import annotations

from collections.abc import Callable

import pytest
from hypothesis import HealthCheck, settings

from compute_market.config import reset_settings
from compute_market.game.params import GameParams, LegacyParams
from compute_market.ledger.contract import Ledger
from compute_market.ledger.types import PlatformParams
from tests.factories import START_BALANCE, market_accounts

# The autouse settings reset below is safe to share across generated examples.
settings.register_profile(
    "compute-market",
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("compute-market")


@pytest.fixture(autouse=True)
def _reset_settings():
    """Reset settings singleton between tests."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def make_ledger() -> Callable[..., Ledger]:
    """Factory for a funded ledger; keyword arguments override PlatformParams."""

    def _make(**platform: object) -> Ledger:
        params = PlatformParams(**{"theta": 50, "n": 2, "pi_a": 1, **platform})
        return Ledger.genesis(params, [(a, START_BALANCE) for a in market_accounts()])

    return _make


@pytest.fixture
def ledger(make_ledger) -> Ledger:
    return make_ledger()


@pytest.fixture
def game_params() -> GameParams:
    """A valid parameter set satisfying every system constraint."""
    return GameParams(
        theta=1.0,
        n=2,
        pi_c=2.0,
        pi_c_hat=2.0,
        pi_r=1.5,
        pi_d=2.0,
        pi_a=0.2,
        g_j=0.1,
        g_r=0.1,
        g_m=0.1,
        b=4.0,
        c_v=0.5,
        c_e=1.0,
        c_d=0.2,
        p_a=0.9,
        p_e=0.8,
        p_v=0.3,
    )


@pytest.fixture
def calibration_params() -> GameParams:
    """Worst case of the calibration point: c_e = π_c, c_d = 0, p_a = 0.99, n = 2, θ = 50.

    These sit on the boundary of the system constraints, so they are built
    with constraint enforcement off.
    """
    return GameParams(
        theta=50,
        n=2,
        pi_c=2.0,
        pi_c_hat=2.0,
        pi_r=2.0,
        pi_d=2.0,
        pi_a=0.0,
        g_j=0.0,
        g_r=0.0,
        g_m=0.0,
        b=4.0,
        c_v=0.5,
        c_e=2.0,
        c_d=0.0,
        p_a=0.99,
        p_e=1.0,
        p_v=0.02,
        enforce_constraints=False,
    )


@pytest.fixture
def legacy_params() -> LegacyParams:
    """The earlier incentive model's published parameter list, with M = 0."""
    return LegacyParams(
        p=0.1, Q=0.999, P_j=0.999, P_m=0.75, r=1.5, f=150.0, B=2.0, C=1.0, C_d=0.1, C_j=1.0, M=0.0
    )
