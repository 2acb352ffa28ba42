"""Durable store for staff, tags, reader config and the access log.

On-disk layout (see STORAGE.md): one newline-delimited JSON file per table
under the data directory.  Keyed tables are rewritten atomically (tmp file +
fsync + rename); the event log is strictly append-only with an fsync barrier
per append, so an event is durable before append_event returns.

Single-writer, multi-reader: one component owns all writes; readers see the
committed in-memory snapshot.
"""

from __future__ import annotations

import json
import logging
import os
from datetime import datetime, timezone
from pathlib import Path

from .access import AccessEvent, AreaConfig, Direction, PersonKind, StaffRecord
from .errors import NotFound, SequenceGap, StoreCorrupt
from .tags import TagFamily, TagRecord, TagType

log = logging.getLogger(__name__)

STAFF_FILE = "staff.jsonl"
TAGS_FILE = "tags.jsonl"
READERS_FILE = "readers.jsonl"
EVENTS_FILE = "events.jsonl"


def ts_to_str(ts: datetime) -> str:
    """ISO-8601 UTC with trailing Z; microseconds kept only when present."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def ts_from_str(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00"))


def event_to_record(event: AccessEvent) -> dict:
    return {
        "seq": event.seq,
        "staff_id": event.staff_id,
        "direction": event.direction.value,
        "area_id": event.area_id,
        "ts": ts_to_str(event.ts),
    }


def record_to_event(record: dict) -> AccessEvent:
    return AccessEvent(
        seq=record["seq"],
        staff_id=record["staff_id"],
        direction=Direction(record["direction"]),
        area_id=record["area_id"],
        ts=ts_from_str(record["ts"]),
    )


def staff_to_record(s: StaffRecord) -> dict:
    return {
        "staff_id": s.staff_id,
        "last_name": s.last_name,
        "first_name": s.first_name,
        "phone": s.phone,
        "kind": s.kind.value,
        "tag_uid": s.tag_uid,
    }


def record_to_staff(r: dict) -> StaffRecord:
    return StaffRecord(
        staff_id=r["staff_id"],
        last_name=r["last_name"],
        first_name=r["first_name"],
        phone=r["phone"],
        kind=PersonKind(r["kind"]),
        tag_uid=r["tag_uid"],
    )


def tag_to_record(t: TagRecord) -> dict:
    return {
        "uid": t.uid,
        "family": t.family.value,
        "tag_type": t.tag_type.value if t.tag_type else None,
        "programmed": t.programmed,
    }


def record_to_tag(r: dict) -> TagRecord:
    return TagRecord(
        uid=r["uid"],
        family=TagFamily(r["family"]),
        tag_type=TagType(r["tag_type"]) if r["tag_type"] else None,
        programmed=r["programmed"],
    )


def reader_to_record(c: AreaConfig) -> dict:
    return {
        "reader_id": c.reader_id,
        "area_id": c.area_id,
        "allowed_staff": sorted(c.allowed_staff) if c.allowed_staff is not None else None,
    }


def record_to_reader(r: dict) -> AreaConfig:
    allowed = r["allowed_staff"]
    return AreaConfig(
        reader_id=r["reader_id"],
        area_id=r["area_id"],
        allowed_staff=frozenset(allowed) if allowed is not None else None,
    )


class Store:
    """Open (or create) the store under data_dir.

    fsync=False skips the per-append durability barrier; use it only for
    throwaway replays and bulk tests, never for a live deployment.
    """

    def __init__(self, data_dir: str | Path, fsync: bool = True):
        self.data_dir = Path(data_dir)
        self.fsync = fsync
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._staff: dict[str, StaffRecord] = {}
        self._tags: dict[int, TagRecord] = {}
        self._readers: dict[int, AreaConfig] = {}
        self.events: list[AccessEvent] = []
        self._load()
        self._events_fh = open(self.data_dir / EVENTS_FILE, "ab")
        self._fsync_dir()

    # -- lifecycle

    def close(self) -> None:
        self._events_fh.close()

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- events

    @property
    def last_seq(self) -> int:
        return self.events[-1].seq if self.events else 0

    def append_event(self, event: AccessEvent) -> None:
        """Append one event; durable (fsynced) before this returns."""
        if event.seq != self.last_seq + 1:
            raise SequenceGap(f"got seq {event.seq}, expected {self.last_seq + 1}")
        line = json.dumps(event_to_record(event), ensure_ascii=False) + "\n"
        self._events_fh.write(line.encode("utf-8"))
        self._events_fh.flush()
        if self.fsync:
            os.fsync(self._events_fh.fileno())
        self.events.append(event)

    def query_events(
        self,
        staff_id: str | None = None,
        area_id: str | None = None,
        ts_from: datetime | None = None,
        ts_to: datetime | None = None,
    ) -> list[AccessEvent]:
        """Events matching every given filter field, in seq order."""
        out = []
        for event in self.events:
            if staff_id is not None and event.staff_id != staff_id:
                continue
            if area_id is not None and event.area_id != area_id:
                continue
            if ts_from is not None and event.ts < ts_from:
                continue
            if ts_to is not None and event.ts > ts_to:
                continue
            out.append(event)
        return out

    # -- staff table

    def upsert_staff(self, record: StaffRecord) -> None:
        self._staff[record.staff_id] = record
        self._rewrite(STAFF_FILE, (staff_to_record(s) for s in self._staff.values()))

    def find_staff(self, staff_id: str) -> StaffRecord | None:
        return self._staff.get(staff_id)

    def get_staff(self, staff_id: str) -> StaffRecord:
        record = self._staff.get(staff_id)
        if record is None:
            raise NotFound(f"staff {staff_id!r}")
        return record

    def list_staff(self) -> list[StaffRecord]:
        return list(self._staff.values())

    def find_staff_by_tag(self, tag_uid: int) -> StaffRecord | None:
        for record in self._staff.values():
            if record.tag_uid == tag_uid:
                return record
        return None

    # -- tag table

    def upsert_tag(self, tag: TagRecord) -> None:
        self._tags[tag.uid] = tag
        self._rewrite(TAGS_FILE, (tag_to_record(t) for t in self._tags.values()))

    def find_tag(self, uid: int) -> TagRecord | None:
        return self._tags.get(uid)

    def get_tag(self, uid: int) -> TagRecord:
        tag = self._tags.get(uid)
        if tag is None:
            raise NotFound(f"tag uid={uid}")
        return tag

    def list_tags(self) -> list[TagRecord]:
        return list(self._tags.values())

    # -- reader table

    def upsert_reader(self, config: AreaConfig) -> None:
        self._readers[config.reader_id] = config
        self._rewrite(READERS_FILE, (reader_to_record(c) for c in self._readers.values()))

    def find_reader(self, reader_id: int) -> AreaConfig | None:
        return self._readers.get(reader_id)

    def get_reader(self, reader_id: int) -> AreaConfig:
        config = self._readers.get(reader_id)
        if config is None:
            raise NotFound(f"reader {reader_id}")
        return config

    def list_readers(self) -> list[AreaConfig]:
        return list(self._readers.values())

    # -- internals

    def _rewrite(self, name: str, records) -> None:
        """Atomically replace a table file (tmp + fsync + rename)."""
        path = self.data_dir / name
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            for record in records:
                fh.write((json.dumps(record, ensure_ascii=False) + "\n").encode("utf-8"))
            fh.flush()
            if self.fsync:
                os.fsync(fh.fileno())
        os.replace(tmp, path)
        self._fsync_dir()

    def _fsync_dir(self) -> None:
        if not self.fsync:
            return
        fd = os.open(self.data_dir, os.O_RDONLY)
        try:
            os.fsync(fd)
        finally:
            os.close(fd)

    def _load(self) -> None:
        for record in self._read_table(STAFF_FILE):
            staff = record_to_staff(record)
            self._staff[staff.staff_id] = staff
        for record in self._read_table(TAGS_FILE):
            tag = record_to_tag(record)
            self._tags[tag.uid] = tag
        for record in self._read_table(READERS_FILE):
            config = record_to_reader(record)
            self._readers[config.reader_id] = config
        for record in self._read_events():
            self.events.append(record_to_event(record))
        for i, event in enumerate(self.events, 1):
            if event.seq != i:
                raise StoreCorrupt(f"event log has seq {event.seq} at position {i}")

    def _read_table(self, name: str) -> list[dict]:
        path = self.data_dir / name
        if not path.exists():
            return []
        records = []
        for line_no, line in enumerate(path.read_bytes().splitlines(), 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise StoreCorrupt(f"{name}:{line_no}: {exc}") from exc
        return records

    def _read_events(self) -> list[dict]:
        """Like _read_table, but a torn trailing write (no newline, from a
        crash mid-append) is truncated away instead of failing the load."""
        path = self.data_dir / EVENTS_FILE
        if not path.exists():
            return []
        raw = path.read_bytes()
        torn = b""
        if raw and not raw.endswith(b"\n"):
            keep, _, torn = raw.rpartition(b"\n")
            raw = keep + b"\n" if keep else b""
            log.warning("truncating torn trailing event record (%d bytes)", len(torn))
            with open(path, "wb") as fh:
                fh.write(raw)
                fh.flush()
                os.fsync(fh.fileno())
        records = []
        for line_no, line in enumerate(raw.splitlines(), 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise StoreCorrupt(f"{EVENTS_FILE}:{line_no}: {exc}") from exc
        return records
