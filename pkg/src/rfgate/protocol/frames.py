"""Framed byte protocol between the reader and the host.

Frame layout (big-endian throughout):

    0xAA 0x55 | length | command | payload... | crc16_hi crc16_lo

where length = 1 + len(payload) and the CRC covers length, command and
payload.  The full grammar is documented in PROTOCOL.md at the repo root.

The byte-level kernels (CRC + scanner) come from the compiled extension when
it is available; set RFGATE_PURE=1 to force the pure-Python fallback.
"""

from __future__ import annotations

import enum
import os
import struct
from dataclasses import dataclass

from ..errors import PayloadTooLong
from ..tags import TagType

if os.environ.get("RFGATE_PURE"):
    from . import _pure as _kernel
else:
    try:
        from . import _native as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _kernel

SOF = b"\xaa\x55"
MAX_PAYLOAD = 64


def kernel_name() -> str:
    """Which codec kernel is active ('_native' or '_pure')."""
    return _kernel.__name__.rsplit(".", 1)[-1]


class Command(enum.IntEnum):
    PING = 0x01
    SET_SCAN = 0x02
    TAG_DETECTED = 0x03
    WRITE_TAG = 0x04
    ACK = 0x06
    NAK = 0x07


_KNOWN_COMMANDS = frozenset(int(c) for c in Command)

# Wire codes for the tag type byte in WRITE_TAG payloads.
TAG_TYPE_TO_CODE = {TagType.STAFF: 0, TagType.GUEST: 1}
CODE_TO_TAG_TYPE = {code: t for t, code in TAG_TYPE_TO_CODE.items()}


@dataclass(frozen=True)
class Frame:
    """One wire-protocol unit: a command byte plus 0-64 payload bytes."""

    command: int
    payload: bytes = b""

    def __post_init__(self):
        if not 0 <= self.command <= 0xFF:
            raise ValueError(f"command byte out of range: {self.command}")
        if len(self.payload) > MAX_PAYLOAD:
            raise PayloadTooLong(f"payload is {len(self.payload)} bytes (max {MAX_PAYLOAD})")

    @property
    def known(self) -> bool:
        """False for command bytes outside the defined set (decodable but flagged)."""
        return self.command in _KNOWN_COMMANDS


def crc16(data: bytes) -> int:
    """CRC-16/CCITT-FALSE over the given bytes."""
    return _kernel.crc16(bytes(data))


def encode_frame(frame: Frame) -> bytes:
    """Serialize a frame; raises PayloadTooLong beyond 64 payload bytes."""
    if len(frame.payload) > MAX_PAYLOAD:
        raise PayloadTooLong(f"payload is {len(frame.payload)} bytes (max {MAX_PAYLOAD})")
    body = bytes([1 + len(frame.payload), frame.command]) + frame.payload
    return SOF + body + struct.pack(">H", _kernel.crc16(body))


def decode_stream(buffer: bytes) -> tuple[list[Frame], int, bytes]:
    """Extract every complete valid frame from buffer.

    Returns (frames, defects, remainder).  Corrupt or stray bytes are skipped
    one at a time (each counted as a defect) until the next start-of-frame;
    a trailing partial frame is returned as the remainder so decoding can
    resume when more bytes arrive.
    """
    raw_frames, defects, consumed = _kernel.scan_frames(bytes(buffer))
    frames = [Frame(command, payload) for command, payload in raw_frames]
    return frames, defects, bytes(buffer[consumed:])


# Payload packing helpers for the defined messages.


def ping_frame() -> Frame:
    return Frame(Command.PING)


def set_scan_frame(on: bool) -> Frame:
    return Frame(Command.SET_SCAN, b"\x01" if on else b"\x00")


def parse_set_scan(frame: Frame) -> bool:
    if frame.command != Command.SET_SCAN or len(frame.payload) != 1:
        raise ValueError("not a SET_SCAN frame")
    return frame.payload[0] != 0


def tag_detected_frame(reader_id: int, uid: int, emf_mv: int) -> Frame:
    return Frame(Command.TAG_DETECTED, struct.pack(">BIH", reader_id, uid, emf_mv))


def parse_tag_detected(frame: Frame) -> tuple[int, int, int]:
    """Returns (reader_id, uid, emf_millivolts)."""
    if frame.command != Command.TAG_DETECTED or len(frame.payload) != 7:
        raise ValueError("not a TAG_DETECTED frame")
    return struct.unpack(">BIH", frame.payload)


def write_tag_frame(uid: int, tag_type: TagType) -> Frame:
    return Frame(Command.WRITE_TAG, struct.pack(">IB", uid, TAG_TYPE_TO_CODE[tag_type]))


def parse_write_tag(frame: Frame) -> tuple[int, TagType]:
    if frame.command != Command.WRITE_TAG or len(frame.payload) != 5:
        raise ValueError("not a WRITE_TAG frame")
    uid, code = struct.unpack(">IB", frame.payload)
    if code not in CODE_TO_TAG_TYPE:
        raise ValueError(f"unknown tag type code {code}")
    return uid, CODE_TO_TAG_TYPE[code]


def ack_frame(for_command: int) -> Frame:
    """ACK payload echoes the command byte being acknowledged."""
    return Frame(Command.ACK, bytes([for_command]))


def nak_frame(for_command: int) -> Frame:
    return Frame(Command.NAK, bytes([for_command]))


def reply_subject(frame: Frame) -> int | None:
    """The command byte an ACK/NAK refers to, or None for other frames."""
    if frame.command in (Command.ACK, Command.NAK) and len(frame.payload) >= 1:
        return frame.payload[0]
    return None
