"""Simulated fixed RFID interrogator with a single built-in antenna.

The reader owns a field of posed tags and a scan loop driven by injected
simulation time (no wall-clock reads, so every scenario replays identically).
Each tick reports at most one readable tag; a reported uid is then held off
for holdoff_s simulated seconds so one badge presentation yields one event.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import protocol
from .coupling import AntennaPose, CouplingCalibration, induced_emf
from .errors import NotConnected, Unprogrammed
from .protocol import Command, Frame
from .tags import TagFamily, TagRecord, program_tag

log = logging.getLogger(__name__)

DEFAULT_HOLDOFF_S = 2.0
DEFAULT_SCAN_PERIOD_S = 0.25


@dataclass
class ReaderSim:
    """State of one simulated reader; mutate only through its methods."""

    reader_id: int = 1
    calibration: CouplingCalibration = field(default_factory=CouplingCalibration.default)
    holdoff_s: float = DEFAULT_HOLDOFF_S
    connected: bool = True
    scanning: bool = False
    field_tags: dict[int, tuple[TagRecord, AntennaPose]] = field(default_factory=dict)
    holdoff: dict[int, float] = field(default_factory=dict)

    def place_tag(self, tag: TagRecord, pose: AntennaPose) -> None:
        """Put a programmed tag into the antenna field (latest pose wins)."""
        if not tag.programmed:
            raise Unprogrammed(f"tag uid={tag.uid} is not programmed")
        self.field_tags[tag.uid] = (tag, pose)

    def remove_tag(self, uid: int) -> None:
        """Take a tag out of the field; unknown uids are a no-op."""
        self.field_tags.pop(uid, None)

    def set_scan(self, on: bool) -> None:
        if not self.connected:
            raise NotConnected("reader link is down")
        self.scanning = on
        if not on:
            self.holdoff.clear()

    def tick(self, sim_time: float) -> list[Frame]:
        """Run one scan cycle; emit at most one TAG_DETECTED frame."""
        if not self.scanning or not self.connected:
            return []
        expired = [uid for uid, t in self.holdoff.items() if sim_time - t >= self.holdoff_s]
        for uid in expired:
            del self.holdoff[uid]
        best: tuple[float, int] | None = None  # (emf, uid); strongest wins, lowest uid on ties
        for uid, (tag, pose) in self.field_tags.items():
            emf = induced_emf(pose, self.calibration)
            if emf < self.calibration.read_threshold_volts:
                continue
            if uid in self.holdoff:
                continue
            if best is None or emf > best[0] or (emf == best[0] and uid < best[1]):
                best = (emf, uid)
        if best is None:
            return []
        emf, uid = best
        self.holdoff[uid] = sim_time
        return [protocol.tag_detected_frame(self.reader_id, uid, round(emf * 1000.0))]

    def handle_frame(self, frame: Frame, sim_time: float) -> tuple[list[Frame], TagRecord | None]:
        """Process one host->reader frame.

        Returns (reply frames, written tag).  The written tag is the new
        record after a successful WRITE_TAG, so the driver can track the
        rewritten uid.
        """
        if not self.connected:
            return [], None
        if frame.command == Command.PING:
            return [protocol.ack_frame(Command.PING)], None
        if frame.command == Command.SET_SCAN:
            try:
                self.set_scan(protocol.parse_set_scan(frame))
            except (ValueError, NotConnected):
                return [protocol.nak_frame(Command.SET_SCAN)], None
            return [protocol.ack_frame(Command.SET_SCAN)], None
        if frame.command == Command.WRITE_TAG:
            return self._handle_write(frame, sim_time)
        log.debug("reader %d: NAK for command 0x%02x", self.reader_id, frame.command)
        return [protocol.nak_frame(frame.command)], None

    def _handle_write(self, frame: Frame, sim_time: float) -> tuple[list[Frame], TagRecord | None]:
        try:
            uid, tag_type = protocol.parse_write_tag(frame)
        except ValueError:
            return [protocol.nak_frame(Command.WRITE_TAG)], None
        target = self._writable_target()
        if target is None:
            return [protocol.nak_frame(Command.WRITE_TAG)], None
        old_uid, pose = target
        tag, _ = self.field_tags.pop(old_uid)
        written = program_tag(tag, uid, tag_type)
        self.field_tags[written.uid] = (written, pose)
        log.info("reader %d: rewrote fielded tag %d -> %d", self.reader_id, old_uid, uid)
        return [protocol.ack_frame(Command.WRITE_TAG)], written

    def _writable_target(self) -> tuple[int, AntennaPose] | None:
        """Strongest readable compatible tag in field (the tag on the writer)."""
        best = None
        for uid, (tag, pose) in self.field_tags.items():
            if tag.family is not TagFamily.T5577_COMPATIBLE:
                continue
            emf = induced_emf(pose, self.calibration)
            if emf < self.calibration.read_threshold_volts:
                continue
            if best is None or emf > best[0] or (emf == best[0] and uid < best[1]):
                best = (emf, uid, pose)
        if best is None:
            return None
        return best[1], best[2]
