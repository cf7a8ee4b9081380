"""Block clock: calls submitted during block k are applied at the start of block k+1."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from compute_market.exceptions import LedgerError
from compute_market.ledger.calls import LedgerCall
from compute_market.ledger.contract import Ledger
from compute_market.ledger.types import LedgerEvent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Applied:
    """What became of one submitted call."""

    call: LedgerCall
    tag: str
    event: LedgerEvent | None = None
    error: LedgerError | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


class BlockClock:
    """Buffers calls and applies them in submission order when the block advances."""

    def __init__(self, ledger: Ledger, interval_ms: int):
        self.ledger = ledger
        self.interval_ms = interval_ms
        self._pending: list[tuple[LedgerCall, str]] = []

    @property
    def block(self) -> int:
        return self.ledger.block

    @property
    def now_ms(self) -> int:
        return self.ledger.now_ms

    @property
    def pending(self) -> int:
        return len(self._pending)

    def submit(self, call: LedgerCall, tag: str = "") -> None:
        self._pending.append((call, tag))

    def tick(self) -> list[Applied]:
        """Advance one block and apply everything submitted during the previous one."""
        block = self.ledger.block + 1
        self.ledger.advance(block, block * self.interval_ms)
        pending, self._pending = self._pending, []
        applied = []
        for call, tag in pending:
            try:
                applied.append(Applied(call, tag, event=self.ledger.apply(call)))
            except LedgerError as e:
                logger.debug("block %d: %s rejected: %s", block, type(call).__name__, e)
                applied.append(Applied(call, tag, error=e))
        return applied

    def wait_until(self, now_ms: int) -> int:
        """Tick empty blocks until the clock is strictly past ``now_ms``."""
        if self._pending:
            raise RuntimeError("wait_until needs an empty call buffer")
        ticks = 0
        while self.ledger.now_ms <= now_ms:
            self.tick()
            ticks += 1
        return ticks
