"""Mixed-strategy equilibria and the JC's optimal tolerance for anomalous results."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from compute_market.exceptions import InvalidParameters, NoRootInUnitInterval, ZeroDenominator
from compute_market.game.params import GameParams
from compute_market.game.utilities import tabulated_utilities

logger = logging.getLogger(__name__)

ROOT_EPSILON = 1e-9
ROOT_XTOL = 1e-12
ROOT_RESIDUAL = 1e-10
TREND_FIELDS = ("n", "theta", "g_m", "p_e", "pi_c")


@dataclass(frozen=True)
class MixedProbability:
    """An equilibrium mixing probability; ``valid`` is False outside [0, 1]."""

    value: float
    valid: bool

    @classmethod
    def of(cls, value: float) -> MixedProbability:
        return cls(value=value, valid=0.0 <= value <= 1.0)


def _ratio(numerator: float, denominator: float, scale: float, what: str) -> float:
    if abs(denominator) <= 1e-12 * max(1.0, scale):
        raise ZeroDenominator(f"{what} is undefined: indifference denominator is zero")
    return numerator / denominator


def equilibrium_pv(params: GameParams) -> MixedProbability:
    """Verification rate that leaves the RP indifferent between executing and deceiving.

    Under the usual convention this is (c_e - c_d) / (p_a^(n+1)·π_c·(θ+n+1)).
    """
    rp, _ = tabulated_utilities(params)
    verify_gap = rp.ev - rp.dv
    pass_gap = rp.ep - rp.dp
    scale = max(abs(v) for v in rp.as_dict().values())
    result = MixedProbability.of(_ratio(-pass_gap, verify_gap - pass_gap, scale, "p_v"))
    if not result.valid:
        logger.warning("p_v = %g lies outside [0, 1]; no interior mixing", result.value)
    return result


def equilibrium_pe(params: GameParams) -> MixedProbability:
    """Execution rate that leaves the JC indifferent between verifying and passing."""
    _, jc = tabulated_utilities(params)
    executed_gap = jc.ev - jc.ep
    deceived_gap = jc.dv - jc.dp
    scale = max(abs(v) for v in jc.as_dict().values())
    result = MixedProbability.of(
        _ratio(deceived_gap, deceived_gap - executed_gap, scale, "p_e")
    )
    if not result.valid:
        logger.warning("p_e = %g lies outside [0, 1]; no interior mixing", result.value)
    return result


def jc_total_utility(params: GameParams) -> float:
    """U^JC under the mixed profile (p_e, p_v)."""
    _, jc = tabulated_utilities(params)
    pe, pv = params.p_e, params.p_v
    return (
        pv * pe * jc.ev
        + pv * (1 - pe) * jc.dv
        + (1 - pv) * pe * jc.ep
        + (1 - pv) * (1 - pe) * jc.dp
    )


def jc_utility_derivative_pa(params: GameParams) -> float:
    """∂U^JC/∂p_a with the stake d and payout π_d held fixed."""
    p = params
    pa, n = p.p_a, p.n
    d = p.stake
    q = pa**n
    dq = n * pa ** (n - 1)
    d_ev = -p.pi_c + p.g_m + d * ((1 - q) + (1 - pa) * dq) + p.pi_d * (dq - (n + 1) * q)
    d_dv = dq * (d + p.pi_d)
    return p.p_v * (p.p_e * d_ev + (1 - p.p_e) * d_dv)


def stationarity(p_a: float, params: GameParams) -> float:
    """Left side minus right side of ∂U^JC/∂p_a = 0, divided by p_v·p_e·π_c·(n+θ+1).

    Assumes π_d = π_c and d = π_c·(θ+n); only n, θ, g_m, p_e and π_c matter.
    """
    n = params.n
    scale = params.pi_c * (n + params.theta + 1)
    return (
        1
        - p_a**n
        + n * p_a ** (n - 1) / params.p_e
        - n * p_a**n
        - (2 * params.pi_c - params.g_m) / scale
    )


def optimal_pa(params: GameParams) -> float:
    """p_a maximizing U^JC, found by bisection on (0, 1)."""
    if params.p_e <= 0:
        raise InvalidParameters(["p_e must be positive to locate the optimal p_a"])
    if params.pi_c <= 0:
        raise InvalidParameters(["pi_c must be positive to locate the optimal p_a"])

    lo, hi = ROOT_EPSILON, 1.0 - ROOT_EPSILON
    f_lo, f_hi = stationarity(lo, params), stationarity(hi, params)
    if f_lo * f_hi > 0:
        raise NoRootInUnitInterval(
            f"stationarity has no sign change on (0, 1): f({lo:g})={f_lo:g}, f({hi:g})={f_hi:g}"
        )
    root = bisect(stationarity, lo, hi, args=(params,), xtol=ROOT_XTOL, maxiter=200)
    residual = abs(stationarity(root, params))
    if residual >= ROOT_RESIDUAL:
        raise NoRootInUnitInterval(f"bisection stopped at {root:g} with residual {residual:g}")
    logger.debug("optimal p_a = %.12f (n=%d, theta=%g)", root, params.n, params.theta)
    return float(root)


def min_optimal_pa(n: int, theta: float) -> float:
    """Optimal p_a in the worst case g_m = 0, p_e = 1: the least p_a the JC will tolerate."""
    worst = GameParams().model_copy(
        update={"n": n, "theta": theta, "g_m": 0.0, "p_e": 1.0, "pi_c": 1.0}
    )
    return optimal_pa(worst)


@dataclass(frozen=True)
class CurvePoint:
    n: int
    p_a: float
    derivative: float


def derivative_curve(
    params: GameParams, n_values: list[int], grid: int = 101
) -> list[CurvePoint]:
    """∂U^JC/∂p_a on an even p_a grid over [0, 1] for each n."""
    points = []
    for n in n_values:
        for p_a in np.linspace(0.0, 1.0, grid):
            at = params.model_copy(update={"n": n, "p_a": float(p_a)})
            points.append(CurvePoint(n, float(p_a), jc_utility_derivative_pa(at)))
    return points


def zero_crossings(points: list[CurvePoint]) -> dict[int, list[float]]:
    """Linearly interpolated p_a values where each n's curve changes sign."""
    crossings: dict[int, list[float]] = {}
    for n in dict.fromkeys(p.n for p in points):
        curve = [p for p in points if p.n == n]
        found = []
        for a, b in zip(curve, curve[1:], strict=False):
            if a.derivative == 0:
                found.append(a.p_a)
            elif a.derivative * b.derivative < 0:
                t = a.derivative / (a.derivative - b.derivative)
                found.append(a.p_a + t * (b.p_a - a.p_a))
        crossings[n] = found
    return crossings


def parameter_trend(params: GameParams, field: str) -> int:
    """Sign of ∂p_a*/∂field: +1 raises the optimal p_a, -1 lowers it, 0 leaves it."""
    if field not in TREND_FIELDS:
        raise InvalidParameters([f"no trend defined for {field!r}; choose from {TREND_FIELDS}"])

    value = getattr(params, field)
    if field == "n":
        lo, hi = value, value + 1
    else:
        step = 1e-3 * max(1.0, abs(value))
        lo, hi = max(value - step, 0.0), value + step
        if field == "p_e":
            lo, hi = max(lo, step), min(hi, 1.0)

    below = optimal_pa(params.model_copy(update={field: lo}))
    above = optimal_pa(params.model_copy(update={field: hi}))
    change = above - below
    if abs(change) < 1e-9:
        return 0
    return 1 if change > 0 else -1
