"""Hypothesis strategies for valid game parameter sets."""

from __future__ import annotations

from hypothesis import strategies as st

from compute_market.game.params import GameParams, LegacyParams

money = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
gap = st.floats(min_value=0.01, max_value=2.0, allow_nan=False)
probability = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def valid_game_params(draw, conventional: bool = False, p_a=probability) -> GameParams:
    """Draw parameters that satisfy every system constraint.

    With ``conventional`` the payout equals the price, the estimate equals
    the price and the stake sits at its lower bound.
    """
    c_d = draw(gap)
    c_e = c_d + draw(gap)
    pi_r = c_e + draw(gap)
    pi_c = pi_r + draw(st.floats(min_value=0.0, max_value=2.0))
    pi_a = draw(money)
    g_j = draw(money)
    fields = {
        "theta": draw(st.floats(min_value=0.0, max_value=60.0)),
        "n": draw(st.integers(min_value=1, max_value=6)),
        "pi_c": pi_c,
        "pi_r": pi_r,
        "pi_a": pi_a,
        "g_j": g_j,
        "g_r": draw(money),
        "g_m": draw(money),
        "b": pi_c + pi_a + g_j + draw(gap),
        "c_v": draw(st.floats(min_value=0.0, max_value=3.0)),
        "c_e": c_e,
        "c_d": c_d,
        "p_a": draw(p_a),
        "p_e": draw(probability),
        "p_v": draw(probability),
    }
    if conventional:
        fields.update(pi_c_hat=pi_c, pi_d=pi_c)
    else:
        pi_c_hat = pi_c + draw(st.floats(min_value=0.0, max_value=1.0))
        min_stake = pi_c_hat * (fields["theta"] + fields["n"])
        fields.update(
            pi_c_hat=pi_c_hat,
            pi_d=draw(st.floats(min_value=0.0, max_value=5.0)),
            d=min_stake + draw(st.floats(min_value=0.0, max_value=50.0)),
        )
    return GameParams(**fields)


@st.composite
def valid_legacy_params(draw) -> LegacyParams:
    return LegacyParams(
        p=draw(probability),
        Q=draw(probability),
        P_j=draw(st.floats(min_value=0.01, max_value=1.0)),
        P_m=draw(probability),
        r=draw(st.floats(min_value=0.0, max_value=10.0)),
        f=draw(st.floats(min_value=0.1, max_value=300.0)),
        B=draw(st.floats(min_value=0.0, max_value=10.0)),
        C=draw(st.floats(min_value=0.0, max_value=5.0)),
        C_d=draw(st.floats(min_value=0.0, max_value=5.0)),
        C_j=draw(st.floats(min_value=0.01, max_value=5.0)),
        M=draw(st.floats(min_value=0.0, max_value=10.0)),
    )
