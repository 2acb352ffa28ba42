"""Application logic: registration, tag assignment and the Enter/Left state machine.

Successive presentations of the same badge at the same area alternate
Enter, Left, Enter, ... per (person, area).  Unknown or unauthorized tags
produce a Denied event (the audit trail keeps rejections) without touching
the alternation state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from datetime import datetime
from typing import TYPE_CHECKING

from .errors import (
    DuplicateStaffId,
    TagAlreadyAssigned,
    UnconfiguredReader,
    UnknownStaff,
    Unprogrammed,
)
from .events import Detection

if TYPE_CHECKING:
    from .store import Store

# staff_id recorded on Denied events for uids that resolve to nobody
UNKNOWN_STAFF_ID = "UNKNOWN"


class PersonKind(enum.Enum):
    STAFF = "staff"
    GUEST = "guest"


class Direction(enum.Enum):
    ENTER = "Enter"
    LEFT = "Left"
    DENIED = "Denied"


@dataclass(frozen=True)
class StaffRecord:
    """One staff/guest row; guests may leave names and phone empty."""

    staff_id: str
    last_name: str = ""
    first_name: str = ""
    phone: str = ""
    kind: PersonKind = PersonKind.STAFF
    tag_uid: int | None = None


@dataclass(frozen=True)
class AreaConfig:
    """Reader-to-area mapping; allowed_staff=None means every assigned tag may enter."""

    reader_id: int
    area_id: str
    allowed_staff: frozenset[str] | None = None


@dataclass(frozen=True)
class AccessEvent:
    seq: int
    staff_id: str
    direction: Direction
    area_id: str
    ts: datetime


class AccessController:
    """Single writer for all access state; queries may run against the store freely."""

    def __init__(self, store: "Store"):
        self.store = store
        self._last: dict[tuple[str, str], Direction] = {}
        for event in store.events:
            if event.direction is not Direction.DENIED:
                self._last[(event.staff_id, event.area_id)] = event.direction

    def register_person(
        self,
        staff_id: str,
        last_name: str = "",
        first_name: str = "",
        phone: str = "",
        kind: PersonKind = PersonKind.STAFF,
    ) -> StaffRecord:
        if not staff_id:
            raise ValueError("staff_id must be non-empty")
        if self.store.find_staff(staff_id) is not None:
            raise DuplicateStaffId(staff_id)
        record = StaffRecord(staff_id, last_name, first_name, phone, kind)
        self.store.upsert_staff(record)
        return record

    def assign_tag(self, staff_id: str, tag_uid: int) -> StaffRecord:
        record = self.store.find_staff(staff_id)
        if record is None:
            raise UnknownStaff(staff_id)
        tag = self.store.find_tag(tag_uid)
        if tag is None or not tag.programmed:
            raise Unprogrammed(f"tag uid={tag_uid} is not a programmed tag")
        owner = self.store.find_staff_by_tag(tag_uid)
        if owner is not None and owner.staff_id != staff_id:
            raise TagAlreadyAssigned(f"uid {tag_uid} already assigned to {owner.staff_id}")
        updated = replace(record, tag_uid=tag_uid)  # a new uid replaces any old one
        self.store.upsert_staff(updated)
        return updated

    def configure_reader(
        self, reader_id: int, area_id: str, allowed_staff: frozenset[str] | None = None
    ) -> AreaConfig:
        config = AreaConfig(reader_id, area_id, allowed_staff)
        self.store.upsert_reader(config)
        return config

    def handle_detection(self, det: Detection, now: datetime) -> AccessEvent:
        """Turn one reader detection into a committed access event."""
        config = self.store.find_reader(det.reader_id)
        if config is None:
            raise UnconfiguredReader(f"reader {det.reader_id} has no area configured")
        person = self.store.find_staff_by_tag(det.uid)
        if person is None:
            return self._append(UNKNOWN_STAFF_ID, Direction.DENIED, config.area_id, now)
        if config.allowed_staff is not None and person.staff_id not in config.allowed_staff:
            return self._append(person.staff_id, Direction.DENIED, config.area_id, now)
        last = self._last.get((person.staff_id, config.area_id))
        direction = Direction.LEFT if last is Direction.ENTER else Direction.ENTER
        return self._append(person.staff_id, direction, config.area_id, now)

    def _append(self, staff_id: str, direction: Direction, area_id: str, now: datetime) -> AccessEvent:
        event = AccessEvent(self.store.last_seq + 1, staff_id, direction, area_id, now)
        self.store.append_event(event)
        if direction is not Direction.DENIED:
            self._last[(staff_id, area_id)] = direction
        return event
