import random

import pytest

from rfgate import protocol
from rfgate.coupling import AntennaPose, CouplingCalibration, can_read
from rfgate.errors import NotConnected, Unprogrammed
from rfgate.protocol import Command
from rfgate.reader import ReaderSim
from rfgate.tags import TagFamily, TagType, blank_tag, program_tag


def make_tag(uid, tag_type=TagType.STAFF):
    return program_tag(blank_tag(), uid, tag_type)


@pytest.fixture
def reader():
    r = ReaderSim(reader_id=1)
    r.set_scan(True)
    return r


def test_place_requires_programmed_tag(reader):
    with pytest.raises(Unprogrammed):
        reader.place_tag(blank_tag(), AntennaPose(25, 0))


def test_place_replaces_pose(reader):
    tag = make_tag(416)
    reader.place_tag(tag, AntennaPose(25, 0))
    reader.place_tag(tag, AntennaPose(100, 0))
    assert len(reader.field_tags) == 1
    assert reader.field_tags[416][1] == AntennaPose(100, 0)


def test_remove_unknown_uid_is_noop(reader):
    reader.place_tag(make_tag(416), AntennaPose(25, 0))
    reader.remove_tag(999)
    assert len(reader.field_tags) == 1
    reader.remove_tag(416)
    assert not reader.field_tags


def test_set_scan_requires_connection():
    reader = ReaderSim(connected=False)
    with pytest.raises(NotConnected):
        reader.set_scan(True)


def test_set_scan_off_clears_holdoff(reader):
    reader.place_tag(make_tag(416), AntennaPose(25, 0))
    assert reader.tick(0.0)
    assert reader.holdoff
    reader.set_scan(False)
    assert not reader.holdoff
    reader.set_scan(True)
    assert reader.set_scan(True) is None  # idempotent


def test_tick_reports_strong_tag_with_emf_millivolts(reader):
    reader.place_tag(make_tag(7319), AntennaPose(25, 0))
    frames = reader.tick(0.0)
    assert len(frames) == 1
    assert protocol.parse_tag_detected(frames[0]) == (1, 7319, 13710)  # 13.71 V


def test_tick_ignores_tag_below_threshold(reader):
    reader.place_tag(make_tag(7319), AntennaPose(150, 180))  # 0.23 V < 0.50 V
    assert reader.tick(0.0) == []


def test_tick_without_scanning_emits_nothing():
    reader = ReaderSim()
    reader.place_tag(make_tag(7319), AntennaPose(25, 0))
    assert reader.tick(0.0) == []


def test_tick_reports_at_most_one_tag(reader):
    reader.place_tag(make_tag(100), AntennaPose(50, 0))
    reader.place_tag(make_tag(200), AntennaPose(25, 0))  # stronger
    frames = reader.tick(0.0)
    assert len(frames) == 1
    assert protocol.parse_tag_detected(frames[0])[1] == 200


def test_tick_tie_breaks_on_lowest_uid(reader):
    reader.place_tag(make_tag(300), AntennaPose(25, 0))
    reader.place_tag(make_tag(200), AntennaPose(25, 0))
    frames = reader.tick(0.0)
    assert protocol.parse_tag_detected(frames[0])[1] == 200


def test_holdoff_suppresses_rereports(reader):
    reader.place_tag(make_tag(416), AntennaPose(25, 0))
    assert len(reader.tick(0.0)) == 1
    assert reader.tick(0.5) == []  # inside the 2 s holdoff
    assert len(reader.tick(2.0)) == 1  # holdoff expired


def test_ten_consecutive_ticks_emit_per_holdoff_window(reader):
    reader.place_tag(make_tag(416), AntennaPose(25, 0))
    period, n_ticks = 0.25, 10
    emitted = sum(len(reader.tick(i * period)) for i in range(n_ticks))
    expected = int((n_ticks - 1) * period // reader.holdoff_s) + 1
    assert emitted == expected == 2


def test_holdoff_frees_other_tags(reader):
    reader.place_tag(make_tag(100), AntennaPose(25, 0))
    reader.place_tag(make_tag(200), AntennaPose(50, 0))
    first = protocol.parse_tag_detected(reader.tick(0.0)[0])[1]
    second = protocol.parse_tag_detected(reader.tick(0.25)[0])[1]
    assert (first, second) == (100, 200)  # strongest first, then the held-off runner-up


def test_tick_never_reports_unreadable_poses():
    rng = random.Random(41)
    cal = CouplingCalibration.default()
    for _ in range(200):
        reader = ReaderSim()
        reader.set_scan(True)
        poses = {}
        for uid in range(1, rng.randrange(2, 6)):
            pose = AntennaPose(rng.uniform(20, 220), rng.uniform(-360, 360))
            poses[uid] = pose
            reader.place_tag(make_tag(uid), pose)
        for frame in reader.tick(0.0):
            _, uid, _ = protocol.parse_tag_detected(frame)
            assert can_read(poses[uid], cal)


def test_handle_ping(reader):
    replies, written = reader.handle_frame(protocol.ping_frame(), 0.0)
    assert [r.command for r in replies] == [Command.ACK]
    assert protocol.reply_subject(replies[0]) == Command.PING
    assert written is None


def test_handle_set_scan(reader):
    replies, _ = reader.handle_frame(protocol.set_scan_frame(False), 0.0)
    assert replies[0].command == Command.ACK
    assert not reader.scanning


def test_handle_write_reprograms_fielded_tag(reader):
    reader.place_tag(make_tag(999, TagType.GUEST), AntennaPose(25, 0))
    replies, written = reader.handle_frame(protocol.write_tag_frame(555, TagType.GUEST), 0.0)
    assert replies[0].command == Command.ACK
    assert written is not None and written.uid == 555
    assert 555 in reader.field_tags and 999 not in reader.field_tags


def test_handle_write_naks_with_no_writable_tag(reader):
    replies, written = reader.handle_frame(protocol.write_tag_frame(555, TagType.STAFF), 0.0)
    assert replies[0].command == Command.NAK
    assert written is None
    # a tag out of range is not writable either
    reader.place_tag(make_tag(999), AntennaPose(150, 180))
    replies, _ = reader.handle_frame(protocol.write_tag_frame(555, TagType.STAFF), 0.0)
    assert replies[0].command == Command.NAK


def test_handle_write_skips_incompatible_tag(reader):
    foreign = program_tag(blank_tag(), 999, TagType.STAFF)
    foreign = foreign.__class__(uid=999, family=TagFamily.OTHER, tag_type=TagType.STAFF, programmed=True)
    reader.place_tag(foreign, AntennaPose(25, 0))
    replies, written = reader.handle_frame(protocol.write_tag_frame(555, TagType.STAFF), 0.0)
    assert replies[0].command == Command.NAK
    assert written is None


def test_handle_unknown_command_naks(reader):
    replies, _ = reader.handle_frame(protocol.Frame(0x5A), 0.0)
    assert replies[0].command == Command.NAK
    assert protocol.reply_subject(replies[0]) == 0x5A


def test_disconnected_reader_is_silent():
    reader = ReaderSim(connected=False)
    assert reader.handle_frame(protocol.ping_frame(), 0.0) == ([], None)
    assert reader.tick(0.0) == []
