"""Shared fixtures: the published staff roster and access-log rows used
throughout the report and scenario tests."""

from datetime import datetime, timezone

import pytest

from rfgate.access import AccessEvent, Direction, PersonKind, StaffRecord
from rfgate.store import Store
from rfgate.tags import TagFamily, TagRecord, TagType

# Staff/guest roster: (staff_id, tag_uid, last, first, phone, kind)
ROSTER = (
    ("SS/408", 416, "KASSIM", "Shakiru O.", "+2348069169216", PersonKind.STAFF),
    ("JS/729", 7319, "ISA", "Hassan B.", "+2348038986930", PersonKind.STAFF),
    ("SS/453", 3865, "HARRAM", "Ibrahim M.", "+2348035097470", PersonKind.STAFF),
    ("SS/579", 13446, "ZUBAIRU", "Aminu", "+2348060903528", PersonKind.STAFF),
    ("SS/709", 1033, "SAMAILA", "Aisha I.", "+2348105307925", PersonKind.STAFF),
    ("SS/784", 27804, "ISA", "Abdullahi A.", "+2349030273716", PersonKind.STAFF),
    ("GS-221", 51723, "GUEST-1", "", "", PersonKind.GUEST),
    ("GS-222", 30018, "GUEST-2", "", "", PersonKind.GUEST),
)

AREA = "Res. Centre"

# Status-window rows: (staff_id, direction, iso timestamp)
STATUS_ROWS = (
    ("JS/729", Direction.ENTER, "2021-09-23T15:21:18Z"),
    ("SS/709", Direction.LEFT, "2021-09-23T16:14:36Z"),
    ("JS/729", Direction.LEFT, "2021-09-23T16:53:24Z"),
    ("SS/408", Direction.ENTER, "2021-09-24T08:28:17Z"),
    ("SS/453", Direction.ENTER, "2021-09-24T09:11:38Z"),
    ("JS/729", Direction.ENTER, "2021-09-24T09:19:44Z"),
    ("SS/453", Direction.LEFT, "2021-09-24T10:05:15Z"),
    ("SS/408", Direction.LEFT, "2021-09-24T11:56:48Z"),
    ("SS/579", Direction.ENTER, "2021-09-24T11:58:04Z"),
    ("SS/579", Direction.LEFT, "2021-09-24T13:05:26Z"),
    ("JS/729", Direction.LEFT, "2021-09-24T15:09:16Z"),
)

# Access-report rows for the same trial (starts one hour later, runs a day longer).
REPORT_ROWS = (
    ("JS/729", Direction.LEFT, "2021-09-23T16:53:24Z"),
    ("SS/408", Direction.ENTER, "2021-09-24T08:28:17Z"),
    ("SS/453", Direction.ENTER, "2021-09-24T09:11:38Z"),
    ("JS/729", Direction.ENTER, "2021-09-24T09:19:44Z"),
    ("SS/453", Direction.LEFT, "2021-09-24T10:05:15Z"),
    ("SS/408", Direction.LEFT, "2021-09-24T11:56:48Z"),
    ("SS/579", Direction.ENTER, "2021-09-24T11:58:04Z"),
    ("SS/579", Direction.LEFT, "2021-09-24T13:05:26Z"),
    ("JS/729", Direction.LEFT, "2021-09-24T15:09:16Z"),
    ("JS/729", Direction.ENTER, "2021-09-25T09:19:38Z"),
    ("GS-221", Direction.ENTER, "2021-09-25T10:03:51Z"),
    ("SS/784", Direction.ENTER, "2021-09-25T10:11:08Z"),
    ("GS-221", Direction.LEFT, "2021-09-25T10:11:29Z"),
    ("SS/709", Direction.ENTER, "2021-09-25T12:09:53Z"),
    ("SS/709", Direction.LEFT, "2021-09-25T12:28:33Z"),
    ("SS/784", Direction.LEFT, "2021-09-25T17:00:12Z"),
)

# Union of both windows in time order (the two STATUS_ROWS-only rows plus all
# REPORT_ROWS).
COMBINED_ROWS = tuple(
    sorted(set(STATUS_ROWS) | set(REPORT_ROWS), key=lambda row: row[2])
)


def ts(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00"))


def events_from_rows(rows) -> list[AccessEvent]:
    return [
        AccessEvent(seq, staff_id, direction, AREA, ts(when))
        for seq, (staff_id, direction, when) in enumerate(rows, 1)
    ]


def populate_roster(store: Store) -> None:
    for staff_id, uid, last, first, phone, kind in ROSTER:
        tag_type = TagType.STAFF if kind is PersonKind.STAFF else TagType.GUEST
        store.upsert_tag(TagRecord(uid, TagFamily.T5577_COMPATIBLE, tag_type, programmed=True))
        store.upsert_staff(StaffRecord(staff_id, last, first, phone, kind, tag_uid=uid))


@pytest.fixture
def store(tmp_path):
    store = Store(tmp_path / "data")
    yield store
    store.close()


@pytest.fixture
def report_store(store):
    """Store preloaded with the roster and the 16 report-window events."""
    populate_roster(store)
    for event in events_from_rows(REPORT_ROWS):
        store.append_event(event)
    return store


@pytest.fixture
def combined_store(store):
    """Roster plus the union of status-window and report-window events."""
    populate_roster(store)
    for event in events_from_rows(COMBINED_ROWS):
        store.append_event(event)
    return store
