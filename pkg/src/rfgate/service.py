"""Deployable access-control service: HTTP API over the simulation pipeline.

All writes funnel through one lock around the SimWorld (single-writer);
request handlers may run on any number of threads.  Committed events fan out
to event-stream subscribers as newline-delimited JSON records.
"""

from __future__ import annotations

import json
import logging
import queue
import threading

import anyio
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, PlainTextResponse, StreamingResponse
from pydantic import BaseModel

from . import protocol
from .access import AccessEvent, PersonKind
from .coupling import CouplingCalibration
from .errors import (
    ConfigInvalid,
    DuplicateStaffId,
    IncompatibleTag,
    LinkDown,
    NotConnected,
    NotFound,
    RfgateError,
    TagAlreadyAssigned,
    UnconfiguredReader,
    UnknownStaff,
    Unprogrammed,
    WriteInFlight,
)
from .reader import DEFAULT_HOLDOFF_S, DEFAULT_SCAN_PERIOD_S
from .reports import access_report, report_csv, status_snapshot
from .sim import PRESENT_DWELL_S, SimWorld
from .store import (
    Store,
    event_to_record,
    reader_to_record,
    staff_to_record,
    tag_to_record,
    ts_from_str,
    ts_to_str,
)
from .tags import TagType

log = logging.getLogger(__name__)

_KINDS = {"staff": PersonKind.STAFF, "guest": PersonKind.GUEST}
_TAG_TYPES = {"staff": TagType.STAFF, "guest": TagType.GUEST}

_ERROR_STATUS: dict[type, int] = {
    UnknownStaff: 404,
    NotFound: 404,
    DuplicateStaffId: 409,
    TagAlreadyAssigned: 409,
    Unprogrammed: 409,
    IncompatibleTag: 409,
    NotConnected: 409,
    WriteInFlight: 409,
    UnconfiguredReader: 409,
    ConfigInvalid: 400,
    LinkDown: 503,
}


@dataclass
class ServiceConfig:
    data_dir: Path = Path("./rfgate-data")
    listen: str = "127.0.0.1:8000"
    read_threshold_volts: float = 0.50
    holdoff_s: float = DEFAULT_HOLDOFF_S
    scan_period_ms: float = DEFAULT_SCAN_PERIOD_S * 1000.0
    clock: Literal["real", "sim"] = "real"
    recent_n: int = 20
    reader_id: int = 1
    calibration_file: Path | None = None
    sim_epoch: datetime | None = None  # sim clock origin; defaults to service start
    ui_dir: Path | None = None
    fsync: bool = True

    def validate(self) -> None:
        if self.read_threshold_volts <= 0:
            raise ConfigInvalid("read threshold must be > 0 volts")
        if self.holdoff_s <= 0:
            raise ConfigInvalid("holdoff must be > 0 seconds")
        if self.scan_period_ms <= 0:
            raise ConfigInvalid("scan period must be > 0 ms")
        if self.recent_n <= 0:
            raise ConfigInvalid("recent_n must be > 0")
        if self.clock not in ("real", "sim"):
            raise ConfigInvalid(f"unknown clock mode {self.clock!r}")

    def host_port(self) -> tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        if not host or not port.isdigit():
            raise ConfigInvalid(f"listen must be host:port, got {self.listen!r}")
        return host, int(port)


class Service:
    """Running service handle: store + world + fanout + optional real-time ticker."""

    def __init__(self, config: ServiceConfig):
        config.validate()
        self.config = config
        try:
            self.store = Store(config.data_dir, fsync=config.fsync)
        except OSError as exc:
            raise ConfigInvalid(f"data dir unusable: {exc}") from exc
        calibration = (
            CouplingCalibration.from_file(config.calibration_file, config.read_threshold_volts)
            if config.calibration_file
            else CouplingCalibration.default(config.read_threshold_volts)
        )
        epoch = config.sim_epoch or datetime.now(timezone.utc)
        self.world = SimWorld(
            self.store,
            epoch=epoch,
            reader_id=config.reader_id,
            calibration=calibration,
            holdoff_s=config.holdoff_s,
            scan_period_s=config.scan_period_ms / 1000.0,
        )
        self.lock = threading.RLock()
        self._subscribers: list[queue.SimpleQueue] = []
        self._stop = threading.Event()
        self._ticker: threading.Thread | None = None
        self.world.on_event.append(self._publish)
        self.app = create_app(self)

    # -- lifecycle

    def start(self) -> "Service":
        if self.config.clock == "real" and self._ticker is None:
            self._ticker = threading.Thread(target=self._run_ticker, daemon=True, name="rfgate-ticker")
            self._ticker.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        if self._ticker is not None:
            self._ticker.join(timeout=5.0)
            self._ticker = None
        self.store.close()

    def _run_ticker(self) -> None:
        period = self.world.scan_period_s
        while not self._stop.wait(period):
            with self.lock:
                elapsed = (datetime.now(timezone.utc) - self.world.epoch).total_seconds()
                if elapsed > self.world.sim_time:
                    self.world.advance_to(elapsed)

    # -- event fanout

    def _publish(self, event: AccessEvent) -> None:
        line = json.dumps(event_to_record(event), ensure_ascii=False) + "\n"
        for q in self._subscribers:
            q.put(line)

    def subscribe(self, since_seq: int) -> tuple[list[str], queue.SimpleQueue]:
        with self.lock:
            backlog = [
                json.dumps(event_to_record(e), ensure_ascii=False) + "\n"
                for e in self.store.events
                if e.seq > since_seq
            ]
            q: queue.SimpleQueue = queue.SimpleQueue()
            self._subscribers.append(q)
        return backlog, q

    def unsubscribe(self, q: queue.SimpleQueue) -> None:
        with self.lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    @property
    def stopping(self) -> bool:
        return self._stop.is_set()


def run_service(config: ServiceConfig) -> Service:
    """Open the store, wire the pipeline and return a started service handle."""
    return Service(config).start()


# -- request bodies


class StaffIn(BaseModel):
    staff_id: str
    last_name: str = ""
    first_name: str = ""
    phone: str = ""
    kind: Literal["staff", "guest"] = "staff"


class ProgramIn(BaseModel):
    uid: int
    tag_type: Literal["staff", "guest"]
    mediated: bool = False


class AssignIn(BaseModel):
    staff_id: str  # in the body because staff ids contain slashes (e.g. "JS/729")
    uid: int


class ReaderIn(BaseModel):
    reader_id: int
    area_id: str
    allowed_staff: list[str] | None = None


class ScanIn(BaseModel):
    on: bool


class PlaceIn(BaseModel):
    uid: int
    distance_cm: float
    angle_deg: float


class PresentIn(PlaceIn):
    dwell_s: float = PRESENT_DWELL_S


class RemoveIn(BaseModel):
    uid: int


class AdvanceIn(BaseModel):
    seconds: float


def create_app(service: Service) -> FastAPI:
    app = FastAPI(title="rfgate", docs_url=None, redoc_url=None)
    world = service.world
    store = service.store

    @app.exception_handler(RfgateError)
    def _domain_error(request, exc: RfgateError):
        status = 500
        for klass, code in _ERROR_STATUS.items():
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse({"error": type(exc).__name__, "detail": str(exc)}, status_code=status)

    @app.exception_handler(ValueError)
    def _value_error(request, exc: ValueError):
        return JSONResponse({"error": "ValueError", "detail": str(exc)}, status_code=400)

    @app.get("/health")
    def health():
        return {"status": "ok", "kernel": protocol.kernel_name(), "clock": service.config.clock}

    @app.get("/config")
    def config():
        c = service.config
        return {
            "data_dir": str(c.data_dir),
            "listen": c.listen,
            "read_threshold_volts": c.read_threshold_volts,
            "holdoff_s": c.holdoff_s,
            "scan_period_ms": c.scan_period_ms,
            "clock": c.clock,
            "recent_n": c.recent_n,
            "reader_id": c.reader_id,
        }

    @app.get("/status")
    def status():
        with service.lock:
            snapshot = status_snapshot(store, world.reader, service.config.recent_n)
            return {
                "connected": snapshot.connected,
                "scanning": snapshot.scanning,
                "clock": service.config.clock,
                "now": ts_to_str(world.now()),
                "kernel": protocol.kernel_name(),
                "link_defects": world.session.defects,
                "recent_events": [event_to_record(e) for e in snapshot.recent_events],
                "last_access": {sid: event_to_record(e) for sid, e in snapshot.last_access.items()},
                "field": [
                    {"uid": uid, "distance_cm": pose.distance_cm, "angle_deg": pose.angle_deg}
                    for uid, (_, pose) in world.reader.field_tags.items()
                ],
            }

    @app.post("/staff", status_code=201)
    def staff_add(body: StaffIn):
        with service.lock:
            record = world.controller.register_person(
                body.staff_id, body.last_name, body.first_name, body.phone, _KINDS[body.kind]
            )
            return staff_to_record(record)

    @app.get("/staff")
    def staff_list():
        with service.lock:
            return [staff_to_record(s) for s in store.list_staff()]

    @app.post("/assign")
    def staff_assign(body: AssignIn):
        with service.lock:
            return staff_to_record(world.controller.assign_tag(body.staff_id, body.uid))

    @app.post("/tags/program", status_code=201)
    def tags_program(body: ProgramIn):
        tag_type = _TAG_TYPES[body.tag_type]
        with service.lock:
            if body.mediated:
                result = world.mediated_write(body.uid, tag_type)
                if not result.ok:
                    return JSONResponse(
                        {"error": "WriteFailed", "detail": f"reader replied {result.reason}"},
                        status_code=409,
                    )
                return tag_to_record(store.get_tag(body.uid))
            return tag_to_record(world.desk_program(body.uid, tag_type))

    @app.get("/tags")
    def tags_list():
        with service.lock:
            return [tag_to_record(t) for t in store.list_tags()]

    @app.post("/readers")
    def readers_config(body: ReaderIn):
        with service.lock:
            allowed = frozenset(body.allowed_staff) if body.allowed_staff is not None else None
            return reader_to_record(world.controller.configure_reader(body.reader_id, body.area_id, allowed))

    @app.get("/readers")
    def readers_list():
        with service.lock:
            return [reader_to_record(c) for c in store.list_readers()]

    @app.post("/scan")
    def scan(body: ScanIn):
        with service.lock:
            world.set_scan(body.on)
            return {"scanning": world.reader.scanning}

    @app.post("/sim/place")
    def sim_place(body: PlaceIn):
        with service.lock:
            world.place(body.uid, body.distance_cm, body.angle_deg)
            return {"placed": body.uid}

    @app.post("/sim/present")
    def sim_present(body: PresentIn):
        with service.lock:
            world.present(body.uid, body.distance_cm, body.angle_deg, body.dwell_s)
            return {"presented": body.uid, "dwell_s": body.dwell_s}

    @app.post("/sim/remove")
    def sim_remove(body: RemoveIn):
        with service.lock:
            world.remove(body.uid)
            return {"removed": body.uid}

    @app.post("/clock/advance")
    def clock_advance(body: AdvanceIn):
        if service.config.clock != "sim":
            raise ConfigInvalid("clock advance only applies in simulated clock mode")
        with service.lock:
            world.advance(body.seconds)
            return {"now": ts_to_str(world.now())}

    def _report_rows(staff_id, area_id, ts_from, ts_to):
        return access_report(
            store,
            staff_id=staff_id,
            area_id=area_id,
            ts_from=ts_from_str(ts_from) if ts_from else None,
            ts_to=ts_from_str(ts_to) if ts_to else None,
        )

    @app.get("/report")
    def report(
        staff_id: str | None = None,
        area_id: str | None = None,
        ts_from: str | None = Query(None, alias="from"),
        ts_to: str | None = Query(None, alias="to"),
    ):
        with service.lock:
            rows = _report_rows(staff_id, area_id, ts_from, ts_to)
        return {
            "rows": [
                {
                    "staff_id": r.staff_id,
                    "access": r.access,
                    "accessed": r.area_id,
                    "date": r.date,
                    "time": r.time,
                }
                for r in rows
            ]
        }

    @app.get("/report.csv")
    def report_as_csv(
        staff_id: str | None = None,
        area_id: str | None = None,
        ts_from: str | None = Query(None, alias="from"),
        ts_to: str | None = Query(None, alias="to"),
    ):
        with service.lock:
            text = report_csv(_report_rows(staff_id, area_id, ts_from, ts_to))
        return PlainTextResponse(text, media_type="text/csv")

    @app.get("/events/stream")
    async def events_stream(since_seq: int = 0, limit: int = 0):
        """NDJSON event feed: committed events after since_seq, then live.

        limit > 0 ends the stream after that many event lines (handy for
        scripts); otherwise it runs until the client disconnects.
        """
        backlog, q = service.subscribe(since_seq)

        async def gen():
            sent = 0
            try:
                for line in backlog:
                    yield line
                    sent += 1
                    if limit and sent >= limit:
                        return
                while not service.stopping:
                    try:
                        yield q.get_nowait()
                    except queue.Empty:
                        await anyio.sleep(0.2)
                        yield "\n"  # keepalive; consumers skip blank lines
                        continue
                    sent += 1
                    if limit and sent >= limit:
                        return
            finally:
                service.unsubscribe(q)

        return StreamingResponse(gen(), media_type="application/x-ndjson")

    if service.config.ui_dir and Path(service.config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=service.config.ui_dir, html=True), name="ui")

    return app
