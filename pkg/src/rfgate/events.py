"""Host-side event manager: monitors the reader byte stream.

One PortSession per reader link.  Calls for a given session must be
serialized by the owner; the returned Detection lists can be handed to any
consumer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import protocol
from .errors import LinkDown, WriteInFlight
from .protocol import Command, Frame
from .tags import TagType

log = logging.getLogger(__name__)

WRITE_TIMEOUT_S = 3.0


@dataclass(frozen=True)
class Detection:
    """One tag sighting reported by a reader."""

    reader_id: int
    uid: int
    emf_mv: int


@dataclass(frozen=True)
class PendingWrite:
    uid: int
    tag_type: TagType
    deadline: float


@dataclass(frozen=True)
class WriteResult:
    uid: int
    tag_type: TagType
    ok: bool
    reason: str  # "ack" | "nak" | "timeout"


class PortSession:
    """Decodes the inbound stream and mediates tag-write requests."""

    def __init__(self):
        self.link_up = True
        self.defects = 0
        self.pending_write: PendingWrite | None = None
        self._buffer = b""
        self._write_results: list[WriteResult] = []

    def ingest(self, data: bytes, now: float | None = None) -> list[Detection]:
        """Append link bytes and return any tag detections, in stream order."""
        if not self.link_up:
            raise LinkDown("cannot ingest while the link is down")
        frames, defects, self._buffer = protocol.decode_stream(self._buffer + data)
        self.defects += defects
        detections = []
        for frame in frames:
            if frame.command == Command.TAG_DETECTED:
                reader_id, uid, emf_mv = protocol.parse_tag_detected(frame)
                detections.append(Detection(reader_id, uid, emf_mv))
            elif frame.command in (Command.ACK, Command.NAK):
                self._handle_reply(frame)
            elif not frame.known:
                log.warning("unknown command byte 0x%02x from reader", frame.command)
        if now is not None:
            self._check_timeout(now)
        return detections

    def request_tag_write(self, uid: int, tag_type: TagType, now: float) -> bytes:
        """Issue a WRITE_TAG; returns the encoded frame to send to the reader."""
        if self.pending_write is not None:
            raise WriteInFlight(f"write of uid={self.pending_write.uid} still pending")
        self.pending_write = PendingWrite(uid, tag_type, now + WRITE_TIMEOUT_S)
        return protocol.encode_frame(protocol.write_tag_frame(uid, tag_type))

    def poll(self, now: float) -> list[WriteResult]:
        """Resolve a timed-out write and drain finished write results."""
        self._check_timeout(now)
        return self.take_write_results()

    def _check_timeout(self, now: float) -> None:
        if self.pending_write is not None and now >= self.pending_write.deadline:
            self._resolve(ok=False, reason="timeout")

    def take_write_results(self) -> list[WriteResult]:
        """Drain finished write results without advancing the clock."""
        results, self._write_results = self._write_results, []
        return results

    def _handle_reply(self, frame: Frame) -> None:
        # ACK/NAK also answer PING and SET_SCAN; only WRITE_TAG replies
        # resolve the pending write (the payload echoes the subject command).
        if protocol.reply_subject(frame) != Command.WRITE_TAG:
            return
        if self.pending_write is None:
            log.warning("stray WRITE_TAG %s with no write pending",
                        "ACK" if frame.command == Command.ACK else "NAK")
            return
        self._resolve(ok=frame.command == Command.ACK,
                      reason="ack" if frame.command == Command.ACK else "nak")

    def _resolve(self, ok: bool, reason: str) -> None:
        assert self.pending_write is not None
        pending = self.pending_write
        self.pending_write = None
        self._write_results.append(WriteResult(pending.uid, pending.tag_type, ok, reason))
