"""Feasibility of pairing a job offer with a resource offer.

Checks the resource, price, architecture, directory, mediator and
deadline conditions, plus deposit sufficiency when platform parameters
are supplied. Violations are collected rather than raised so the solver
and the ledger can report every failed condition at once.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from compute_market.ledger.pricing import compute_min_deposit
from compute_market.ledger.types import (
    Account,
    AccountId,
    JobOffer,
    PlatformParams,
    ResourceOffer,
    Role,
)

# Condition identifiers, in evaluation order.
INSTRUCTION_CAPACITY = "instruction_capacity"
BANDWIDTH_CAPACITY = "bandwidth_capacity"
RAM_CAPACITY = "ram_capacity"
STORAGE_CAPACITY = "storage_capacity"
INSTRUCTION_PRICE = "instruction_price"
BANDWIDTH_PRICE = "bandwidth_price"
ARCH = "arch"
DIRECTORY = "directory"
MEDIATOR = "mediator"
DEADLINE = "deadline"
JOB_DEPOSIT = "job_deposit"
RESOURCE_DEPOSIT = "resource_deposit"
UNREGISTERED = "unregistered"

CONDITIONS = (
    INSTRUCTION_CAPACITY,
    BANDWIDTH_CAPACITY,
    RAM_CAPACITY,
    STORAGE_CAPACITY,
    INSTRUCTION_PRICE,
    BANDWIDTH_PRICE,
    ARCH,
    DIRECTORY,
    MEDIATOR,
    DEADLINE,
    JOB_DEPOSIT,
    RESOURCE_DEPOSIT,
)


@dataclass
class FeasibilityReport:
    """Result of a feasibility check.

    ``chosen_mediator`` is set only when there are no violations.
    """

    violations: list[str] = field(default_factory=list)
    eligible_mediators: list[AccountId] = field(default_factory=list)
    chosen_mediator: AccountId | None = None

    @property
    def feasible(self) -> bool:
        return not self.violations

    def add_violation(self, condition: str) -> None:
        self.violations.append(condition)


def eligible_mediators(
    jo: JobOffer,
    rp: Account,
    jc: Account,
    registry: Mapping[AccountId, Account],
) -> list[AccountId]:
    """Common trusted mediators able to re-run the job, sorted by id."""
    found = []
    for mediator_id in sorted(jc.trusted_mediators & rp.trusted_mediators):
        mediator = registry.get(mediator_id)
        if mediator is None or mediator.role != Role.MEDIATOR:
            continue
        if mediator.arch != rp.arch:
            continue
        if jo.directory not in mediator.trusted_directories:
            continue
        found.append(mediator_id)
    return found


def check_feasible(
    jo: JobOffer,
    ro: ResourceOffer,
    registry: Mapping[AccountId, Account],
    now_ms: int,
    platform: PlatformParams | None = None,
) -> FeasibilityReport:
    """Evaluate every matching condition for a (job offer, resource offer) pair.

    Args:
        jo: The job offer.
        ro: The resource offer.
        registry: Registered accounts by id (JC, RP and mediators).
        now_ms: Current simulation time in milliseconds.
        platform: When given, both deposits must still cover their minimum
            after the solver's match incentive is paid out.

    Returns:
        FeasibilityReport listing violated condition identifiers.
    """
    report = FeasibilityReport()
    jc = registry.get(jo.job_creator)
    rp = registry.get(ro.res_provider)
    if jc is None or rp is None:
        report.add_violation(UNREGISTERED)
        return report

    limits, caps = jo.limits, ro.capacities
    if caps.instruction_count < limits.instruction_count:
        report.add_violation(INSTRUCTION_CAPACITY)
    if caps.bandwidth < limits.bandwidth:
        report.add_violation(BANDWIDTH_CAPACITY)
    if caps.ram < limits.ram:
        report.add_violation(RAM_CAPACITY)
    if caps.local_storage < limits.local_storage:
        report.add_violation(STORAGE_CAPACITY)
    if ro.instruction_price > jo.instruction_max_price:
        report.add_violation(INSTRUCTION_PRICE)
    if ro.bandwidth_price > jo.bandwidth_max_price:
        report.add_violation(BANDWIDTH_PRICE)
    if jo.arch != rp.arch:
        report.add_violation(ARCH)
    if jo.directory not in rp.trusted_directories:
        report.add_violation(DIRECTORY)

    report.eligible_mediators = eligible_mediators(jo, rp, jc, registry)
    if not report.eligible_mediators:
        report.add_violation(MEDIATOR)

    # Deadlines are in ms, timePerInstruction in µs.
    run_time_us = rp.time_per_instruction_us * limits.instruction_count
    if now_ms * 1000 + run_time_us > jo.completion_deadline_ms * 1000:
        report.add_violation(DEADLINE)

    if platform is not None:
        jo_min = compute_min_deposit(jo.price_estimate, platform.theta, platform.n, platform.pi_a)
        if jo.deposit_value - jo.match_incentive < jo_min:
            report.add_violation(JOB_DEPOSIT)
        ro_min = compute_min_deposit(ro.price_estimate, platform.theta, platform.n, platform.pi_a)
        if ro.deposit_value - ro.match_incentive < ro_min:
            report.add_violation(RESOURCE_DEPOSIT)

    if report.feasible:
        report.chosen_mediator = report.eligible_mediators[0]
    return report
