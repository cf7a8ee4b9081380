"""Event-log export.

One CSV row per event: ``block,index,event,job_id,fields`` where
``fields`` is a compact JSON object of the event's key/value pairs in
emission order, so values may hold spaces, ``=`` or commas.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable
from pathlib import Path

from compute_market.ledger.types import EventKind, LedgerEvent

EVENT_CSV_HEADER = ("block", "index", "event", "job_id", "fields")


def event_row(event: LedgerEvent) -> list[str]:
    fields = json.dumps(dict(event.fields), separators=(",", ":"), ensure_ascii=False)
    return [str(event.block), str(event.index), event.kind.value, event.subject_id, fields]


def events_to_csv(events: Iterable[LedgerEvent]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVENT_CSV_HEADER)
    for event in events:
        writer.writerow(event_row(event))
    return buf.getvalue()


def write_events_csv(events: Iterable[LedgerEvent], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(events_to_csv(events), encoding="utf-8")
    return path


def parse_events_csv(text: str) -> list[LedgerEvent]:
    """Read an exported event log back into events."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != EVENT_CSV_HEADER:
        raise ValueError(f"unexpected event log header: {header}")
    events = []
    for block, index, kind, subject_id, fields in reader:
        pairs = tuple((str(k), str(v)) for k, v in json.loads(fields).items())
        events.append(
            LedgerEvent(
                block=int(block),
                index=int(index),
                kind=EventKind(kind),
                subject_id=subject_id,
                fields=pairs,
            )
        )
    return events
