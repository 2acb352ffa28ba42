import random

import pytest

from rfgate import protocol
from rfgate.errors import PayloadTooLong
from rfgate.protocol import Command, Frame, _pure
from rfgate.tags import TagType

try:
    from rfgate.protocol import _native
except ImportError:
    _native = None

KERNELS = [_pure] + ([_native] if _native is not None else [])


def crc16_shift_register(data: bytes) -> int:
    """Independent bit-by-bit oracle for CRC-16/CCITT-FALSE (written before
    the table-driven implementations; kept free of tables on purpose)."""
    reg = 0xFFFF
    for byte in data:
        for bit in range(8):
            msb = (reg >> 15) & 1
            inbit = (byte >> (7 - bit)) & 1
            reg = (reg << 1) & 0xFFFF
            if msb ^ inbit:
                reg ^= 0x1021
    return reg


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
class TestCrc:
    def test_known_answers(self, kernel):
        assert kernel.crc16(b"") == 0xFFFF  # init value, zero passes
        assert kernel.crc16(b"123456789") == 0x29B1
        assert kernel.crc16(b"\x00") == 0xE1F0
        assert kernel.crc16(b"\xff") == 0xFF00

    def test_known_answers_match_oracle(self, kernel):
        for data in (b"", b"123456789", b"\x00", b"\xff"):
            assert kernel.crc16(data) == crc16_shift_register(data)

    def test_random_inputs_match_oracle(self, kernel):
        rng = random.Random(31)
        for _ in range(200):
            data = rng.randbytes(rng.randrange(70))
            assert kernel.crc16(data) == crc16_shift_register(data)


def test_active_kernel_matches_pure_scanner():
    if _native is None:
        pytest.skip("compiled kernel not built")
    rng = random.Random(32)
    cases = [b"", b"\xaa", b"\xaa\x55", b"\xaa\x55\x00", b"\xaa\x55\xff\x01"]
    for _ in range(300):
        chunk = rng.randbytes(rng.randrange(120))
        if rng.random() < 0.5:
            chunk += protocol.encode_frame(_random_frame(rng))
        cases.append(chunk)
    for buf in cases:
        assert _native.scan_frames(buf) == _pure.scan_frames(buf)
        assert _native.crc16(buf) == _pure.crc16(buf)


def _random_frame(rng: random.Random) -> Frame:
    return Frame(rng.randrange(256), rng.randbytes(rng.randrange(65)))


def test_encode_ping():
    # CRC over (len=01, cmd=01) is 0x3E1F per the shift-register oracle
    assert protocol.encode_frame(protocol.ping_frame()) == bytes.fromhex("aa5501013e1f")


def test_encode_set_scan_on():
    assert protocol.encode_frame(protocol.set_scan_frame(True)) == bytes.fromhex("aa55020201d4bf")


def test_payload_limit():
    Frame(Command.PING, b"x" * 64)
    with pytest.raises(PayloadTooLong):
        Frame(Command.PING, b"x" * 65)


def test_round_trip_single_frame():
    frame = protocol.tag_detected_frame(1, 7319, 13710)
    frames, defects, rest = protocol.decode_stream(protocol.encode_frame(frame))
    assert frames == [frame]
    assert defects == 0
    assert rest == b""


def test_garbage_prefix_resyncs():
    encoded = protocol.encode_frame(protocol.ping_frame())
    frames, defects, rest = protocol.decode_stream(b"\x01\x02\xaa\x99" + encoded)
    assert frames == [protocol.ping_frame()]
    assert defects >= 1
    assert rest == b""


def test_truncated_frame_is_retained_not_flagged():
    encoded = protocol.encode_frame(protocol.ping_frame())
    frames, defects, rest = protocol.decode_stream(encoded[:-1])
    assert frames == []
    assert defects == 0
    assert rest == encoded[:-1]


def test_concatenation_preserves_order():
    rng = random.Random(33)
    frames = [_random_frame(rng) for _ in range(2000)]
    buf = b"".join(protocol.encode_frame(f) for f in frames)
    decoded, defects, rest = protocol.decode_stream(buf)
    assert decoded == frames
    assert defects == 0
    assert rest == b""


def test_single_byte_corruption_never_accepts_a_frame():
    rng = random.Random(34)
    for _ in range(300):
        frame = _random_frame(rng)
        encoded = bytearray(protocol.encode_frame(frame))
        pos = rng.randrange(len(encoded))
        encoded[pos] ^= rng.randrange(1, 256)
        decoded, _, _ = protocol.decode_stream(bytes(encoded))
        assert decoded == [], f"corrupted byte {pos} of {bytes(encoded).hex()} accepted {decoded}"


def test_corruption_then_resync_on_next_frame():
    rng = random.Random(35)
    for _ in range(100):
        bad = bytearray(protocol.encode_frame(_random_frame(rng)))
        bad[rng.randrange(len(bad))] ^= rng.randrange(1, 256)
        good = _random_frame(rng)
        decoded, defects, rest = protocol.decode_stream(bytes(bad) + protocol.encode_frame(good))
        assert decoded == [good]
        assert defects >= 1
        assert rest == b""


def _mixed_stream(rng: random.Random) -> tuple[bytes, list[Frame]]:
    parts, sent = [], []
    for _ in range(rng.randrange(1, 30)):
        if rng.random() < 0.3:
            parts.append(rng.randbytes(rng.randrange(1, 10)))
        else:
            frame = _random_frame(rng)
            sent.append(frame)
            parts.append(protocol.encode_frame(frame))
    return b"".join(parts), sent


def test_incremental_decode_equals_whole_buffer():
    rng = random.Random(36)
    for _ in range(50):
        buf, _ = _mixed_stream(rng)
        whole_frames, whole_defects, whole_rest = protocol.decode_stream(buf)
        frames, defects, rest = [], 0, b""
        for i in range(len(buf)):
            got, d, rest = protocol.decode_stream(rest + buf[i : i + 1])
            frames.extend(got)
            defects += d
        assert frames == whole_frames
        assert defects == whole_defects
        assert rest == whole_rest


def test_unknown_command_bytes_decode_but_are_flagged():
    stray = Frame(0x5A, b"\x01")
    frames, defects, _ = protocol.decode_stream(protocol.encode_frame(stray))
    assert frames == [stray]
    assert defects == 0
    assert not frames[0].known
    assert protocol.ping_frame().known


def test_tag_detected_pack_parse():
    frame = protocol.tag_detected_frame(3, 0xDEADBEEF, 13710)
    assert protocol.parse_tag_detected(frame) == (3, 0xDEADBEEF, 13710)
    with pytest.raises(ValueError):
        protocol.parse_tag_detected(protocol.ping_frame())


def test_write_tag_pack_parse():
    frame = protocol.write_tag_frame(27804, TagType.STAFF)
    assert protocol.parse_write_tag(frame) == (27804, TagType.STAFF)
    frame = protocol.write_tag_frame(51723, TagType.GUEST)
    assert protocol.parse_write_tag(frame) == (51723, TagType.GUEST)
    with pytest.raises(ValueError):
        protocol.parse_write_tag(Frame(Command.WRITE_TAG, b"\x00\x00\x00\x01\x09"))


def test_ack_nak_subject():
    assert protocol.reply_subject(protocol.ack_frame(Command.WRITE_TAG)) == Command.WRITE_TAG
    assert protocol.reply_subject(protocol.nak_frame(Command.SET_SCAN)) == Command.SET_SCAN
    assert protocol.reply_subject(protocol.ping_frame()) is None
