"""Scripted scenario replay against a simulated clock.

A script is one timestamped command per line ('#' starts a comment); the
grammar is documented in SCENARIOS.md.  Replay is fully deterministic: the
same script always produces the same report bytes.
"""

from __future__ import annotations

import shlex
import tempfile
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .access import AccessEvent, PersonKind
from .coupling import CouplingCalibration
from .errors import RfgateError, ScenarioStepError, ScriptParseError
from .reader import DEFAULT_SCAN_PERIOD_S
from .reports import access_report, report_csv
from .sim import PRESENT_DWELL_S, SimWorld
from .store import Store, ts_from_str
from .tags import TagType

_KINDS = {"staff": PersonKind.STAFF, "guest": PersonKind.GUEST}
_TAG_TYPES = {"staff": TagType.STAFF, "guest": TagType.GUEST}

VERBS = (
    "configure-reader",
    "register",
    "program",
    "assign",
    "scan",
    "place",
    "remove",
    "present",
    "wait",
    "report",
)


@dataclass(frozen=True)
class ScriptCommand:
    line_no: int
    ts: datetime
    verb: str
    args: tuple[str, ...]


@dataclass
class ReportFilter:
    staff_id: str | None = None
    area_id: str | None = None
    ts_from: datetime | None = None
    ts_to: datetime | None = None


@dataclass
class ScenarioResult:
    report: str  # CSV text, header included
    events: list[AccessEvent] = field(default_factory=list)
    link_defects: int = 0


def parse_script(text: str) -> list[ScriptCommand]:
    """Parse a script; raises ScriptParseError with the offending line number."""
    commands: list[ScriptCommand] = []
    last_ts: datetime | None = None
    for line_no, raw in enumerate(text.splitlines(), 1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise ScriptParseError(line_no, str(exc)) from exc
        if not tokens:
            continue
        if len(tokens) < 2:
            raise ScriptParseError(line_no, "expected '<timestamp> <command> ...'")
        try:
            ts = ts_from_str(tokens[0])
        except ValueError:
            raise ScriptParseError(line_no, f"bad timestamp {tokens[0]!r}") from None
        if last_ts is not None and ts < last_ts:
            raise ScriptParseError(line_no, "timestamps must be non-decreasing")
        last_ts = ts
        verb, args = tokens[1], tuple(tokens[2:])
        if verb not in VERBS:
            raise ScriptParseError(line_no, f"unknown command {verb!r}")
        _check_arity(line_no, verb, args)
        commands.append(ScriptCommand(line_no, ts, verb, args))
    return commands


def _check_arity(line_no: int, verb: str, args: tuple[str, ...]) -> None:
    spec = {
        "configure-reader": (2, 2),
        "register": (2, 5),
        "program": (2, 2),
        "assign": (2, 2),
        "scan": (1, 1),
        "place": (3, 3),
        "remove": (1, 1),
        "present": (3, 4),
        "wait": (0, 0),
        "report": (0, 4),
    }
    low, high = spec[verb]
    if not low <= len(args) <= high:
        raise ScriptParseError(line_no, f"{verb} takes {low}..{high} arguments, got {len(args)}")
    if verb == "scan" and args[0] not in ("on", "off"):
        raise ScriptParseError(line_no, f"scan takes 'on' or 'off', got {args[0]!r}")
    if verb in ("register", "program"):
        kind = args[1] if verb == "register" else args[1]
        if kind not in _KINDS:
            raise ScriptParseError(line_no, f"{verb} kind must be staff|guest, got {kind!r}")
    if verb == "report":
        for arg in args:
            if "=" not in arg or arg.split("=", 1)[0] not in ("staff", "area", "from", "to"):
                raise ScriptParseError(line_no, f"bad report filter {arg!r}")


def run_scenario(
    text: str,
    data_dir: str | Path | None = None,
    calibration: CouplingCalibration | None = None,
    holdoff_s: float = 2.0,
    scan_period_s: float = DEFAULT_SCAN_PERIOD_S,
) -> ScenarioResult:
    """Execute a script and return the resulting access report.

    With no data_dir the store lives in a throwaway temp directory.  Step
    failures raise ScenarioStepError carrying the script line number.
    """
    commands = parse_script(text)
    if data_dir is None:
        with tempfile.TemporaryDirectory(prefix="rfgate-replay-") as tmp:
            return _execute(commands, Path(tmp), calibration, holdoff_s, scan_period_s)
    return _execute(commands, Path(data_dir), calibration, holdoff_s, scan_period_s)


def _execute(
    commands: list[ScriptCommand],
    data_dir: Path,
    calibration: CouplingCalibration | None,
    holdoff_s: float,
    scan_period_s: float,
) -> ScenarioResult:
    result = ScenarioResult(report=report_csv([]))
    if not commands:
        return result
    store = Store(data_dir, fsync=False)  # replay output is derived, not a system of record
    try:
        world = SimWorld(
            store,
            epoch=commands[0].ts,
            calibration=calibration,
            holdoff_s=holdoff_s,
            scan_period_s=scan_period_s,
        )
        world.on_event.append(result.events.append)
        report_filter = ReportFilter()
        for cmd in commands:
            world.advance_to((cmd.ts - world.epoch).total_seconds())
            try:
                _apply(world, cmd, report_filter)
            except (RfgateError, ValueError) as exc:
                raise ScenarioStepError(cmd.line_no, f"{cmd.verb}: {exc}") from exc
        # flush the scan tick pending at the last command's timestamp
        world.advance(world.scan_period_s)
        result.report = report_csv(
            access_report(
                store,
                staff_id=report_filter.staff_id,
                area_id=report_filter.area_id,
                ts_from=report_filter.ts_from,
                ts_to=report_filter.ts_to,
            )
        )
        result.link_defects = world.session.defects
        return result
    finally:
        store.close()


def _apply(world: SimWorld, cmd: ScriptCommand, report_filter: ReportFilter) -> None:
    args = cmd.args
    if cmd.verb == "configure-reader":
        world.controller.configure_reader(int(args[0]), args[1])
    elif cmd.verb == "register":
        staff_id, kind = args[0], _KINDS[args[1]]
        rest = list(args[2:]) + [""] * (3 - len(args[2:]))
        world.controller.register_person(staff_id, rest[0], rest[1], rest[2], kind)
    elif cmd.verb == "program":
        world.desk_program(int(args[0]), _TAG_TYPES[args[1]])
    elif cmd.verb == "assign":
        world.controller.assign_tag(args[0], int(args[1]))
    elif cmd.verb == "scan":
        world.set_scan(args[0] == "on")
    elif cmd.verb == "place":
        world.place(int(args[0]), float(args[1]), float(args[2]))
    elif cmd.verb == "remove":
        world.remove(int(args[0]))
    elif cmd.verb == "present":
        dwell = float(args[3]) if len(args) == 4 else PRESENT_DWELL_S
        world.present(int(args[0]), float(args[1]), float(args[2]), dwell)
    elif cmd.verb == "wait":
        pass  # advancing to the timestamp was the whole point
    elif cmd.verb == "report":
        for arg in args:
            key, value = arg.split("=", 1)
            if key == "staff":
                report_filter.staff_id = value
            elif key == "area":
                report_filter.area_id = value
            elif key == "from":
                report_filter.ts_from = ts_from_str(value)
            elif key == "to":
                report_filter.ts_to = ts_from_str(value)
    else:  # pragma: no cover - parse_script rejects unknown verbs
        raise AssertionError(cmd.verb)
