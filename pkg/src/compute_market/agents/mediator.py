"""Mediation by n-fold re-execution."""

from __future__ import annotations

from compute_market.agents.jobs import JobSpec, execute_job
from compute_market.agents.rng import RngStream
from compute_market.exceptions import InvalidParameters
from compute_market.ledger.types import MediationResult, Party, Verdict


def mediate(
    spec: JobSpec, rp_result_hash: str, match_id: str, n: int, rng: RngStream
) -> MediationResult:
    """Re-run the job ``n`` times and assign fault.

    Any anomalous or disagreeing replica means the job itself is
    non-deterministic, which is the JC's fault. Otherwise the replicas agree
    on one result and whoever contradicts it is at fault.
    """
    if n <= 0:
        raise InvalidParameters([f"mediation needs at least one replica, got n={n}"])

    replicas = [execute_job(spec, rng) for _ in range(n)]
    hashes = {r.result_hash for r in replicas}
    usage = spec.resource_profile

    if not all(r.is_normal for r in replicas) or len(hashes) > 1:
        return MediationResult(
            match_id=match_id,
            verdict=Verdict.CORRECT_RESULTS,
            faulty_party=Party.JOB_CREATOR,
            usage=usage,
            non_deterministic=True,
        )

    consensus = replicas[0].result_hash
    if rp_result_hash != consensus:
        return MediationResult(
            match_id=match_id,
            verdict=Verdict.WRONG_RESULTS,
            faulty_party=Party.RESOURCE_PROVIDER,
            usage=usage,
            result_hash=consensus,
        )
    return MediationResult(
        match_id=match_id,
        verdict=Verdict.CORRECT_RESULTS,
        faulty_party=Party.JOB_CREATOR,
        usage=usage,
        result_hash=consensus,
    )
