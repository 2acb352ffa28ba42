"""Deterministic simulation driver.

SimWorld owns the reader, the port session and the access controller, moves
a simulated clock forward in scan-period steps, and shuttles protocol bytes
between the reader and the host exactly as a serial link would.  All state
changes flow through one SimWorld instance, which callers must serialize.
"""

from __future__ import annotations

import heapq
import logging
import math
from datetime import datetime, timedelta, timezone
from typing import Callable

from . import protocol
from .access import AccessController, AccessEvent
from .coupling import AntennaPose, CouplingCalibration
from .errors import NotConnected, NotFound, UnconfiguredReader
from .events import PortSession, WriteResult
from .reader import DEFAULT_SCAN_PERIOD_S, ReaderSim
from .store import Store
from .tags import TagFamily, TagRecord, TagType, blank_tag, program_tag

log = logging.getLogger(__name__)

PRESENT_DWELL_S = 0.5  # a badge presentation sits in the field this long


class SimWorld:
    """One reader wired to the host pipeline over the in-process byte channel."""

    def __init__(
        self,
        store: Store,
        epoch: datetime,
        reader_id: int = 1,
        calibration: CouplingCalibration | None = None,
        holdoff_s: float = 2.0,
        scan_period_s: float = DEFAULT_SCAN_PERIOD_S,
    ):
        if scan_period_s <= 0:
            raise ValueError("scan_period_s must be > 0")
        if epoch.tzinfo is None:
            epoch = epoch.replace(tzinfo=timezone.utc)
        self.store = store
        self.epoch = epoch
        self.scan_period_s = scan_period_s
        self.reader = ReaderSim(
            reader_id=reader_id,
            calibration=calibration or CouplingCalibration.default(),
            holdoff_s=holdoff_s,
        )
        self.session = PortSession()
        self.controller = AccessController(store)
        self.population: dict[int, TagRecord] = {t.uid: t for t in store.list_tags()}
        self.sim_time = 0.0
        self.unconfigured_drops = 0
        self.on_event: list[Callable[[AccessEvent], None]] = []
        self._tick_index = 0
        self._removals: list[tuple[float, int]] = []  # (due time, uid) heap

    # -- clock

    def now(self) -> datetime:
        return self.epoch + timedelta(seconds=self.sim_time)

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("cannot advance backwards")
        self.advance_to(self.sim_time + seconds)

    def advance_to(self, target: float) -> None:
        """Run the world forward to target sim-time (seconds since epoch).

        Ticks strictly before target are run; a tick landing exactly on
        target stays pending so that actions taken at target (placing a tag,
        enabling scan) are visible to it.  Scheduled auto-removals take
        effect before a tick at the same instant.
        """
        if target < self.sim_time:
            raise ValueError(f"time went backwards: {target} < {self.sim_time}")
        while True:
            next_removal = self._removals[0][0] if self._removals else None
            horizon = target if next_removal is None else min(next_removal, target)
            if self.reader.scanning and self.reader.field_tags:
                t = self._tick_index * self.scan_period_s
                while t < horizon:
                    self.sim_time = t
                    self._tick(t)
                    self._tick_index += 1
                    t = self._tick_index * self.scan_period_s
            else:
                # no tick in this span can emit anything: consume them wholesale
                if self._tick_index * self.scan_period_s < horizon:
                    self._tick_index = math.ceil(horizon / self.scan_period_s)
            self.sim_time = horizon
            if next_removal is not None and next_removal <= target:
                _, uid = heapq.heappop(self._removals)
                self.reader.remove_tag(uid)
                continue
            break
        self.sim_time = target

    def _tick(self, t: float) -> None:
        for frame in self.reader.tick(t):
            detections = self.session.ingest(protocol.encode_frame(frame), now=t)
            for det in detections:
                try:
                    event = self.controller.handle_detection(det, self.now())
                except UnconfiguredReader:
                    self.unconfigured_drops += 1
                    log.warning("dropping detection from unconfigured reader %d", det.reader_id)
                    continue
                for callback in self.on_event:
                    callback(event)

    # -- host -> reader channel

    def _send(self, frame_bytes: bytes) -> None:
        frames, defects, rest = protocol.decode_stream(frame_bytes)
        if defects or rest:
            raise ValueError("malformed frame on host->reader channel")
        for frame in frames:
            replies, written = self.reader.handle_frame(frame, self.sim_time)
            if written is not None:
                self.population[written.uid] = written
                self.store.upsert_tag(written)
            for reply in replies:
                self.session.ingest(protocol.encode_frame(reply), now=self.sim_time)

    def set_scan(self, on: bool) -> None:
        """Flip scanning through the control link (SET_SCAN + ACK)."""
        if not self.reader.connected:
            raise NotConnected("reader link is down")
        self._send(protocol.encode_frame(protocol.set_scan_frame(on)))

    def mediated_write(self, uid: int, tag_type: TagType) -> WriteResult:
        """Write (uid, type) to whatever compatible tag sits in the field."""
        frame_bytes = self.session.request_tag_write(uid, tag_type, self.sim_time)
        self._send(frame_bytes)
        results = self.session.poll(self.sim_time)
        assert len(results) == 1, "in-process write must resolve synchronously"
        return results[0]

    # -- world actions

    def desk_program(self, uid: int, tag_type: TagType,
                     family: TagFamily = TagFamily.T5577_COMPATIBLE) -> TagRecord:
        """Program a tag on the desk writer (off-reader), keeping it rewritable."""
        existing = self.population.get(uid)
        tag = program_tag(existing if existing is not None else blank_tag(family), uid, tag_type)
        self.population[tag.uid] = tag
        self.store.upsert_tag(tag)
        return tag

    def place(self, uid: int, distance_cm: float, angle_deg: float) -> None:
        tag = self.population.get(uid)
        if tag is None:
            raise NotFound(f"no simulated tag with uid={uid}")
        self.reader.place_tag(tag, AntennaPose(distance_cm, angle_deg))

    def remove(self, uid: int) -> None:
        self.reader.remove_tag(uid)

    def present(self, uid: int, distance_cm: float, angle_deg: float,
                dwell_s: float = PRESENT_DWELL_S) -> None:
        """Badge presentation: place now, auto-remove after dwell_s."""
        if dwell_s <= 0:
            raise ValueError("dwell_s must be > 0")
        self.place(uid, distance_cm, angle_deg)
        heapq.heappush(self._removals, (self.sim_time + dwell_s, uid))
