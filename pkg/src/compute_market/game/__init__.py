"""Closed-form analysis of the outsourcing game and the earlier incentive model."""

from compute_market.game.equilibrium import equilibrium_pe, equilibrium_pv, optimal_pa
from compute_market.game.legacy import legacy_honest_equilibrium, legacy_utilities
from compute_market.game.params import GameParams, LegacyParams
from compute_market.game.utilities import classify_jc_type, expected_utilities

__all__ = [
    "GameParams",
    "LegacyParams",
    "classify_jc_type",
    "equilibrium_pe",
    "equilibrium_pv",
    "expected_utilities",
    "legacy_honest_equilibrium",
    "legacy_utilities",
    "optimal_pa",
]
