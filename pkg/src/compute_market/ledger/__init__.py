"""Contract ledger: offers, escrow, job state machine and settlement."""
