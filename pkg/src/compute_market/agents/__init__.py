"""Job creator, resource provider and mediator behaviour for the simulator."""

from compute_market.agents.behaviour import JcStrategy, PrivateAccount, RpStrategy, jc_react, rp_act
from compute_market.agents.jobs import JobSpec, execute_job
from compute_market.agents.mediator import mediate
from compute_market.agents.rng import RngStream

__all__ = [
    "JcStrategy",
    "JobSpec",
    "PrivateAccount",
    "RngStream",
    "RpStrategy",
    "execute_job",
    "jc_react",
    "mediate",
    "rp_act",
]
