import random
from datetime import date, datetime, timedelta, timezone

import pytest

from rfgate.access import AccessEvent, Direction
from rfgate.errors import UnknownStaff
from rfgate.reader import ReaderSim
from rfgate.reports import (
    REPORT_HEADER,
    access_count,
    access_report,
    parse_row_instant,
    render_row,
    report_csv,
    status_snapshot,
)

from conftest import AREA, STATUS_ROWS, events_from_rows, populate_roster, ts


def test_full_report_matches_fixture(report_store):
    rows = access_report(report_store)
    assert len(rows) == 16
    first = rows[0]
    assert (first.staff_id, first.access, first.area_id) == ("JS/729", "Left", AREA)
    assert (first.date, first.time) == ("23/09/2021", "16:53:24")  # zero-padded


def test_report_filter_by_staff(report_store):
    rows = access_report(report_store, staff_id="SS/579")
    assert [(r.access, r.date, r.time) for r in rows] == [
        ("Enter", "24/09/2021", "11:58:04"),
        ("Left", "24/09/2021", "13:05:26"),
    ]


def test_empty_log_gives_empty_report(store):
    assert access_report(store) == []
    assert report_csv([]) == "Staff ID,Access,Accessed,Date,Time\n"


def test_report_row_count_equals_query_count(report_store):
    for staff_id in (None, "JS/729", "GS-221"):
        rows = access_report(report_store, staff_id=staff_id)
        events = report_store.query_events(staff_id=staff_id)
        assert len(rows) == len(events)


def test_csv_header_and_shape(report_store):
    text = report_csv(access_report(report_store))
    lines = text.splitlines()
    assert lines[0] == ",".join(REPORT_HEADER)
    assert len(lines) == 17
    assert lines[1] == "JS/729,Left,Res. Centre,23/09/2021,16:53:24"


def test_render_parse_round_trip_truncates_to_seconds():
    rng = random.Random(81)
    for _ in range(200):
        instant = datetime(2021, 9, 23, tzinfo=timezone.utc) + timedelta(
            seconds=rng.randrange(10_000_000), microseconds=rng.randrange(1_000_000)
        )
        event = AccessEvent(1, "SS/408", Direction.ENTER, AREA, instant)
        parsed = parse_row_instant(render_row(event))
        assert parsed == instant.replace(microsecond=0)


def test_access_count_over_combined_fixture(combined_store):
    assert access_count(combined_store, "SS/579", date(2021, 9, 24)) == 2
    assert access_count(combined_store, "SS/579", date(2021, 9, 23)) == 0
    assert access_count(combined_store, "JS/729", date(2021, 9, 25)) == 5
    assert access_count(combined_store, "GS-222", date(2021, 9, 25)) == 0  # never badged


def test_access_count_unknown_staff(report_store):
    with pytest.raises(UnknownStaff):
        access_count(report_store, "nobody", date(2021, 9, 24))


def test_access_count_ignores_denied(store):
    populate_roster(store)
    store.append_event(AccessEvent(1, "SS/408", Direction.ENTER, AREA, ts("2021-09-24T08:00:00Z")))
    store.append_event(AccessEvent(2, "SS/408", Direction.DENIED, AREA, ts("2021-09-24T09:00:00Z")))
    assert access_count(store, "SS/408", date(2021, 9, 24)) == 1


def test_access_count_matches_brute_force(store):
    rng = random.Random(82)
    populate_roster(store)
    staff_ids = ["SS/408", "JS/729", "GS-221"]
    events = []
    for seq in range(1, 300):
        event = AccessEvent(
            seq,
            rng.choice(staff_ids),
            rng.choice((Direction.ENTER, Direction.LEFT, Direction.DENIED)),
            AREA,
            datetime(2021, 9, rng.randrange(20, 28), rng.randrange(24), tzinfo=timezone.utc),
        )
        events.append(event)
        store.append_event(event)
    for staff_id in staff_ids:
        for day in range(20, 28):
            cutoff = date(2021, 9, day)
            expected = sum(
                1
                for e in events
                if e.staff_id == staff_id
                and e.direction is not Direction.DENIED
                and e.ts.date() <= cutoff
            )
            assert access_count(store, staff_id, cutoff) == expected


def status_store(store):
    populate_roster(store)
    for event in events_from_rows(STATUS_ROWS):
        store.append_event(event)
    return store


def test_status_snapshot_last_access(store):
    snapshot = status_snapshot(status_store(store), ReaderSim(scanning=True))
    assert snapshot.connected and snapshot.scanning
    last = snapshot.last_access["JS/729"]
    assert last.direction is Direction.LEFT
    assert last.ts == ts("2021-09-24T15:09:16Z")


def test_status_snapshot_recent_window(store):
    snapshot = status_snapshot(status_store(store), ReaderSim(), recent_n=5)
    assert len(snapshot.recent_events) == 5
    assert [e.seq for e in snapshot.recent_events] == [7, 8, 9, 10, 11]  # newest-last


def test_status_snapshot_tracks_scan_flag(store):
    reader = ReaderSim()
    reader.set_scan(True)
    assert status_snapshot(store, reader).scanning
    reader.set_scan(False)
    snapshot = status_snapshot(store, reader)
    assert not snapshot.scanning
    assert snapshot.recent_events == ()  # empty log still reports flags
