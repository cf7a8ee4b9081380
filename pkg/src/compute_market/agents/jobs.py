"""The non-deterministic job model.

A job returns its true result with probability p_a per execution and
otherwise one of a small space of anomalous results. Result identities are
sha256 digests under distinct prefixes, so forged results never collide
with true or anomalous ones.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field

from compute_market.agents.rng import RngStream
from compute_market.ledger.types import ResourceVector

ANOMALOUS_SPACE = 16


def _digest(*parts: object) -> str:
    return hashlib.sha256(":".join(str(p) for p in parts).encode()).hexdigest()


class JobSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    job_id: str
    p_a: Annotated[float, Field(ge=0.0, le=1.0)] = 1.0
    anomaly_seed: int = 0
    resource_profile: ResourceVector

    @property
    def deterministic(self) -> bool:
        return self.p_a == 1.0

    @property
    def true_result_hash(self) -> str:
        return _digest("true", self.job_id)

    def anomalous_hash(self, index: int) -> str:
        return _digest("anomalous", self.job_id, self.anomaly_seed, index % ANOMALOUS_SPACE)

    def forged_hash(self, index: int) -> str:
        return _digest("forged", self.job_id, index)

    def is_anomalous(self, result_hash: str) -> bool:
        return any(result_hash == self.anomalous_hash(i) for i in range(ANOMALOUS_SPACE))


@dataclass(frozen=True)
class Execution:
    result_hash: str
    is_normal: bool
    usage: ResourceVector


def execute_job(spec: JobSpec, rng: RngStream) -> Execution:
    if rng.bernoulli(spec.p_a):
        return Execution(spec.true_result_hash, True, spec.resource_profile)
    index = rng.integers(0, ANOMALOUS_SPACE)
    return Execution(spec.anomalous_hash(index), False, spec.resource_profile)
