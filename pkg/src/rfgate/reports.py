"""Report views over the store: access report, access counts, status snapshot.

All views are read-only over committed store state.  Dates render as
zero-padded dd/mm/yyyy and times as HH:MM:SS (UTC); rendering is lossless
back to the stored instant truncated to seconds.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, datetime, timezone

from .access import AccessEvent, Direction
from .errors import UnknownStaff
from .reader import ReaderSim
from .store import Store

REPORT_HEADER = ("Staff ID", "Access", "Accessed", "Date", "Time")
DEFAULT_RECENT_N = 20


@dataclass(frozen=True)
class AccessReportRow:
    staff_id: str
    access: str  # "Enter" | "Left" | "Denied"
    area_id: str
    date: str  # dd/mm/yyyy
    time: str  # HH:MM:SS


@dataclass(frozen=True)
class StatusSnapshot:
    connected: bool
    scanning: bool
    recent_events: tuple[AccessEvent, ...]  # newest-last
    last_access: dict[str, AccessEvent]  # per staff_id


def render_row(event: AccessEvent) -> AccessReportRow:
    ts = event.ts.astimezone(timezone.utc)
    return AccessReportRow(
        staff_id=event.staff_id,
        access=event.direction.value,
        area_id=event.area_id,
        date=ts.strftime("%d/%m/%Y"),
        time=ts.strftime("%H:%M:%S"),
    )


def parse_row_instant(row: AccessReportRow) -> datetime:
    """Inverse of render_row's date/time fields (seconds resolution)."""
    return datetime.strptime(f"{row.date} {row.time}", "%d/%m/%Y %H:%M:%S").replace(
        tzinfo=timezone.utc
    )


def access_report(
    store: Store,
    staff_id: str | None = None,
    area_id: str | None = None,
    ts_from: datetime | None = None,
    ts_to: datetime | None = None,
) -> list[AccessReportRow]:
    """The filtered access log rendered for display, in seq order."""
    events = store.query_events(staff_id=staff_id, area_id=area_id, ts_from=ts_from, ts_to=ts_to)
    return [render_row(event) for event in events]


def report_csv(rows: list[AccessReportRow]) -> str:
    """Comma-separated export with the report window's column names."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow((row.staff_id, row.access, row.area_id, row.date, row.time))
    return buf.getvalue()


def access_count(store: Store, staff_id: str, up_to_date: date) -> int:
    """Number of non-Denied events for staff_id dated up_to_date or earlier."""
    if store.find_staff(staff_id) is None:
        raise UnknownStaff(staff_id)
    return sum(
        1
        for event in store.events
        if event.staff_id == staff_id
        and event.direction is not Direction.DENIED
        and event.ts.astimezone(timezone.utc).date() <= up_to_date
    )


def status_snapshot(store: Store, reader: ReaderSim, recent_n: int = DEFAULT_RECENT_N) -> StatusSnapshot:
    """Live reader flags plus the last recent_n events and per-staff last access."""
    last: dict[str, AccessEvent] = {}
    for event in store.events:
        last[event.staff_id] = event
    recent = tuple(store.events[-recent_n:]) if recent_n > 0 else ()
    return StatusSnapshot(
        connected=reader.connected,
        scanning=reader.scanning,
        recent_events=recent,
        last_access=last,
    )
