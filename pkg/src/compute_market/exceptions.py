"""Custom exception hierarchy for compute-market."""

from __future__ import annotations


class ComputeMarketError(Exception):
    """Base exception for all compute-market errors."""


# --- Ledger -----------------------------------------------------------------


class LedgerError(ComputeMarketError):
    """A protocol call was rejected by the ledger.

    Rejected calls never change ledger state. ``code`` is the stable
    machine-readable name used in metrics and event exports.
    """

    code = "LedgerError"

    def __init__(self, message: str):
        self.message = message
        super().__init__(f"{self.code}: {message}")


class UnregisteredActor(LedgerError):
    code = "UnregisteredActor"

    def __init__(self, account_id: str):
        self.account_id = account_id
        super().__init__(f"account '{account_id}' is not registered")


class InsufficientDeposit(LedgerError):
    code = "InsufficientDeposit"

    def __init__(self, deposit: int, required: int):
        self.deposit = deposit
        self.required = required
        super().__init__(f"deposit {deposit} is below the minimum {required}")


class InsufficientBalance(LedgerError):
    code = "InsufficientBalance"

    def __init__(self, account_id: str, balance: int, required: int):
        self.account_id = account_id
        self.balance = balance
        self.required = required
        super().__init__(f"account '{account_id}' holds {balance}, needs {required}")


class NotOwner(LedgerError):
    code = "NotOwner"


class AlreadyMatched(LedgerError):
    code = "AlreadyMatched"


class Infeasible(LedgerError):
    code = "Infeasible"

    def __init__(self, reasons: list[str]):
        self.reasons = reasons
        super().__init__(f"match violates: {', '.join(reasons)}")


class StaleOffer(LedgerError):
    code = "StaleOffer"


class NotMatchedProvider(LedgerError):
    code = "NotMatchedProvider"


class PastDeadline(LedgerError):
    code = "PastDeadline"


class InvalidUsage(LedgerError):
    """Reported usage is inconsistent with the result status."""

    code = "InvalidUsage"


class ReactionWindowOpen(LedgerError):
    code = "ReactionWindowOpen"


class NotParty(LedgerError):
    code = "NotParty"


class NotJobCreator(LedgerError):
    code = "NotJobCreator"


class WrongState(LedgerError):
    code = "WrongState"

    def __init__(self, subject: str, state: str, operation: str):
        self.subject = subject
        self.state = state
        self.operation = operation
        super().__init__(f"{subject} is {state}; {operation} not allowed")


class NotAssignedMediator(LedgerError):
    code = "NotAssignedMediator"


class DeadlineNotReached(LedgerError):
    code = "DeadlineNotReached"


class DuplicateCall(LedgerError):
    code = "DuplicateCall"


class MoneyOverflow(LedgerError):
    code = "MoneyOverflow"


# --- Analysis ---------------------------------------------------------------


class AnalysisError(ComputeMarketError):
    """A closed-form game computation is undefined for the given parameters."""


class InvalidParameters(AnalysisError):
    """Parameters violate the system constraints of the game."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        error_list = "\n  - ".join(errors)
        super().__init__(f"invalid game parameters:\n  - {error_list}")


class ZeroDenominator(AnalysisError):
    """An equilibrium expression divides by zero."""


class NoRootInUnitInterval(AnalysisError):
    """The stationarity equation has no sign change on (0, 1)."""


class ConventionError(AnalysisError):
    """A simplified expression was requested outside its convention (π_d = π_c)."""


# --- Configuration ----------------------------------------------------------


class ConfigurationError(ComputeMarketError):
    """Missing or invalid configuration (settings, scenario files, grids)."""


class ConfigInvalid(ConfigurationError):
    """A scenario or parameter file failed schema validation."""

    def __init__(self, source: str, errors: list[str]):
        self.source = source
        self.errors = errors
        error_list = "\n  - ".join(errors)
        super().__init__(f"'{source}' is invalid:\n  - {error_list}")


class ScenarioNotFoundError(ConfigurationError):
    """Named scenario does not exist in the library or on disk."""

    def __init__(self, name: str, available: list[str] | None = None):
        self.name = name
        self.available = available
        msg = f"scenario not found: {name}"
        if available:
            from difflib import get_close_matches

            suggestions = get_close_matches(name, available, n=3, cutoff=0.4)
            if suggestions:
                msg += f". Did you mean: {', '.join(suggestions)}?"
        super().__init__(msg)


class UnknownGridField(ConfigurationError):
    """A sweep grid names a field that neither the scenario nor GameParams has."""

    def __init__(self, field: str):
        self.field = field
        super().__init__(f"unknown grid field: {field}")
