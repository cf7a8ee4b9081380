"""Parameter sets for the outsourcing game and the earlier two-strategy model.

Analysis works in plain floats in one currency unit; the ledger's integer
micro-units are not used here.
"""

from __future__ import annotations

from typing import Annotated, Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from compute_market.exceptions import InvalidParameters

Probability = Annotated[float, Field(ge=0.0, le=1.0)]
NonNegative = Annotated[float, Field(ge=0.0)]


class GameParams(BaseModel):
    """Every symbol of the extensive-form game.

    ``d`` is the forfeitable stake excluding the availability fee; it
    defaults to its lower bound π̂_c·(θ+n). ``pi_m`` defaults to π̂_c·n.
    Set ``enforce_constraints=False`` to study boundary cases such as the
    worst case c_e = π_c, c_d = 0.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    theta: NonNegative = 50.0
    n: Annotated[int, Field(gt=0)] = 2
    d: NonNegative | None = None
    pi_c: NonNegative = 2.0
    pi_c_hat: NonNegative = 2.0
    pi_r: NonNegative = 2.0
    pi_d: NonNegative = 2.0
    pi_m: NonNegative | None = None
    pi_a: NonNegative = 0.0
    g_j: NonNegative = 0.0
    g_r: NonNegative = 0.0
    g_m: NonNegative = 0.0
    b: NonNegative = 4.0
    c_v: NonNegative = 0.5
    c_e: NonNegative = 1.0
    c_d: NonNegative = 0.1
    p_a: Probability = 0.99
    p_e: Probability = 1.0
    p_v: Probability = 0.02
    enforce_constraints: bool = True

    @property
    def min_stake(self) -> float:
        return self.pi_c_hat * (self.theta + self.n)

    @property
    def stake(self) -> float:
        """d, the deposit forfeited by the party at fault (net of π_a)."""
        return self.min_stake if self.d is None else self.d

    @property
    def mediation_fee(self) -> float:
        """π_m, paid to the mediator out of the forfeited deposit."""
        return self.pi_c_hat * self.n if self.pi_m is None else self.pi_m

    @property
    def follows_convention(self) -> bool:
        """π_d = π_c, π̂_c = π_c and d at its lower bound, as the simplified tables assume."""
        return (
            self.pi_d == self.pi_c
            and self.pi_c_hat == self.pi_c
            and abs(self.stake - self.pi_c * (self.theta + self.n)) <= 1e-12 * max(1.0, self.stake)
        )

    def constraint_violations(self) -> list[str]:
        errors = []
        if not self.b > self.pi_c + self.pi_a + self.g_j:
            errors.append("b must exceed pi_c + pi_a + g_j")
        if not self.c_e > self.c_d > 0:
            errors.append("costs must satisfy c_e > c_d > 0")
        if not self.pi_c_hat >= self.pi_c >= self.pi_r > self.c_e:
            errors.append("prices must satisfy pi_c_hat >= pi_c >= pi_r > c_e")
        if self.stake < self.min_stake:
            errors.append(f"d = {self.stake} is below pi_c_hat*(theta+n) = {self.min_stake}")
        return errors

    @model_validator(mode="after")
    def validate_constraints(self) -> GameParams:
        if self.enforce_constraints:
            errors = self.constraint_violations()
            if errors:
                raise InvalidParameters(errors)
        return self

    def replace(self, **changes: Any) -> GameParams:
        """Copy with changes, re-running validation and derived defaults."""
        return GameParams.model_validate({**self.model_dump(), **changes})


class LegacyParams(BaseModel):
    """Parameters of the earlier comply/disobey incentive model.

    ``p`` verification probability, ``Q`` RP success probability, ``P_j`` JC
    detection probability, ``P_m`` mediator correctness, ``r`` reward, ``f``
    fine, ``B`` benefit, ``C`` honest cost, ``C_d`` deception cost, ``C_j``
    verification cost, ``M`` mediation cost.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    p: Probability = 0.1
    Q: Probability = 0.999
    P_j: Probability = 0.999
    P_m: Probability = 0.75
    r: NonNegative = 1.5
    f: NonNegative = 150.0
    B: float = 2.0
    C: NonNegative = 1.0
    C_d: NonNegative = 0.1
    C_j: NonNegative = 1.0
    M: NonNegative = 0.0

    def replace(self, **changes: Any) -> LegacyParams:
        return LegacyParams.model_validate({**self.model_dump(), **changes})
