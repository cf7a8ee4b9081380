"""Solver: pair pending job offers with pending resource offers.

Two modes:

- ``greedy``: job offers in arrival order each take the earliest-arrived
  feasible resource offer still free. The result is maximal.
- ``maximum``: maximum-cardinality matching on the feasibility graph
  (Hopcroft-Karp via networkx).
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Mapping, Sequence
from enum import Enum
from typing import TypeVar

import networkx as nx

from compute_market.ledger.types import (
    Account,
    AccountId,
    JobOfferRecord,
    Match,
    PlatformParams,
    ResourceOfferRecord,
)
from compute_market.matching.feasibility import check_feasible

logger = logging.getLogger(__name__)


class SolverMode(str, Enum):
    GREEDY = "greedy"
    MAXIMUM = "maximum"


T = TypeVar("T", JobOfferRecord, ResourceOfferRecord)


def _by_arrival(records: Sequence[T]) -> list[T]:
    return sorted(records, key=lambda r: (r.arrival, r.offer_id))


def feasible_pairs(
    jobs: Sequence[JobOfferRecord],
    resources: Sequence[ResourceOfferRecord],
    registry: Mapping[AccountId, Account],
    now_ms: int,
    platform: PlatformParams | None = None,
) -> dict[tuple[str, str], AccountId]:
    """All feasible (job offer id, resource offer id) pairs with their chosen mediator."""
    pairs: dict[tuple[str, str], AccountId] = {}
    for jo in _by_arrival(jobs):
        for ro in _by_arrival(resources):
            report = check_feasible(jo.offer, ro.offer, registry, now_ms, platform)
            if report.chosen_mediator is not None:
                pairs[(jo.offer_id, ro.offer_id)] = report.chosen_mediator
    return pairs


def greedy_match(
    jobs: Sequence[JobOfferRecord],
    resources: Sequence[ResourceOfferRecord],
    registry: Mapping[AccountId, Account],
    now_ms: int,
    platform: PlatformParams | None = None,
) -> list[Match]:
    """Greedy matching by arrival index, then offer id."""
    ordered_resources = _by_arrival(resources)
    used: set[str] = set()
    matches: list[Match] = []
    for jo in _by_arrival(jobs):
        for ro in ordered_resources:
            if ro.offer_id in used:
                continue
            report = check_feasible(jo.offer, ro.offer, registry, now_ms, platform)
            if report.chosen_mediator is None:
                continue
            used.add(ro.offer_id)
            matches.append(
                Match(
                    job_offer_id=jo.offer_id,
                    resource_offer_id=ro.offer_id,
                    mediator=report.chosen_mediator,
                    match_time_ms=now_ms,
                )
            )
            break
    return matches


def maximum_match(
    jobs: Sequence[JobOfferRecord],
    resources: Sequence[ResourceOfferRecord],
    registry: Mapping[AccountId, Account],
    now_ms: int,
    platform: PlatformParams | None = None,
) -> list[Match]:
    """Maximum-cardinality matching, returned in job arrival order."""
    pairs = feasible_pairs(jobs, resources, registry, now_ms, platform)
    graph = nx.Graph()
    job_nodes = [("job", jo.offer_id) for jo in _by_arrival(jobs)]
    graph.add_nodes_from(job_nodes)
    graph.add_nodes_from(("resource", ro.offer_id) for ro in _by_arrival(resources))
    graph.add_edges_from((("job", j), ("resource", r)) for j, r in pairs)

    mate = nx.bipartite.maximum_matching(graph, top_nodes=job_nodes)
    matches = []
    for node in job_nodes:
        if node not in mate:
            continue
        jo_id, ro_id = node[1], mate[node][1]
        matches.append(
            Match(
                job_offer_id=jo_id,
                resource_offer_id=ro_id,
                mediator=pairs[(jo_id, ro_id)],
                match_time_ms=now_ms,
            )
        )
    logger.debug("maximum matching: %d of %d feasible pairs used", len(matches), len(pairs))
    return matches


def solve(
    mode: SolverMode,
    jobs: Sequence[JobOfferRecord],
    resources: Sequence[ResourceOfferRecord],
    registry: Mapping[AccountId, Account],
    now_ms: int,
    platform: PlatformParams | None = None,
) -> list[Match]:
    if mode == SolverMode.MAXIMUM:
        return maximum_match(jobs, resources, registry, now_ms, platform)
    return greedy_match(jobs, resources, registry, now_ms, platform)


def brute_force_maximum(edges: set[tuple[str, str]]) -> int:
    """Size of a maximum matching by exhaustive search over used-resource sets.

    Exponential in the number of resources; meant for instances of a
    handful of offers per side.
    """
    lefts = sorted({j for j, _ in edges})
    rights = sorted({r for _, r in edges})
    bit = {r: 1 << i for i, r in enumerate(rights)}
    options = [[bit[r] for j2, r in sorted(edges) if j2 == j] for j in lefts]

    @functools.cache
    def best(i: int, used: int) -> int:
        if i == len(lefts):
            return 0
        result = best(i + 1, used)
        for mask in options[i]:
            if not used & mask:
                result = max(result, 1 + best(i + 1, used | mask))
        return result

    return best(0, 0)
