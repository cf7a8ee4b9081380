"""Job price and security-deposit formulas."""

from __future__ import annotations

from compute_market.exceptions import InvalidParameters
from compute_market.ledger.types import JobResult, Money, ResourceOffer, ResourceVector


def price_usage(usage: ResourceVector, instruction_price: Money, bandwidth_price: Money) -> Money:
    return usage.instruction_count * instruction_price + usage.bandwidth * bandwidth_price


def compute_job_price(result: JobResult, ro: ResourceOffer) -> Money:
    """Actual price π_c of a job: usage times the RP's ask prices.

    RAM and local storage are feasibility constraints only and are not billed.
    """
    return price_usage(result.usage, ro.instruction_price, ro.bandwidth_price)


def compute_min_deposit(estimate: Money, theta: int, n: int, pi_a: Money) -> Money:
    """Minimum security deposit: estimate·θ + estimate·n + π_a.

    Raises:
        InvalidParameters: If θ < 0 or n ≤ 0.
    """
    if theta < 0:
        raise InvalidParameters([f"theta must be >= 0, got {theta}"])
    if n <= 0:
        raise InvalidParameters([f"n must be > 0, got {n}"])
    return estimate * theta + estimate * n + pi_a
