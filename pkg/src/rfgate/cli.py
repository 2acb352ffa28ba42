"""Command-line interface.

`serve` and `replay` run the system; every other verb is a thin HTTP client
for a running service, mirroring the endpoint surface one-to-one so anything
the operator console can do, a script can do too.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from .errors import RfgateError
from .reader import DEFAULT_HOLDOFF_S, DEFAULT_SCAN_PERIOD_S
from .scenario import run_scenario
from .sim import PRESENT_DWELL_S


@click.group()
def main():
    """RFID access-control service with a simulated reader."""


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


# -- server-side commands


@main.command()
@click.option("--data-dir", type=click.Path(path_type=Path), default=Path("./rfgate-data"), show_default=True)
@click.option("--listen", default="127.0.0.1:8000", show_default=True)
@click.option("--threshold-volts", type=float, default=0.50, show_default=True)
@click.option("--holdoff-s", type=float, default=DEFAULT_HOLDOFF_S, show_default=True)
@click.option("--scan-period-ms", type=float, default=DEFAULT_SCAN_PERIOD_S * 1000, show_default=True)
@click.option("--clock", type=click.Choice(["real", "sim"]), default="real", show_default=True)
@click.option("--calibration", type=click.Path(exists=True, path_type=Path), default=None,
              help="Calibration table file (defaults to the built-in bench data).")
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None,
              help="Serve a built operator console from this directory at /ui.")
def serve(data_dir, listen, threshold_volts, holdoff_s, scan_period_ms, clock, calibration, ui_dir):
    """Run the access-control service."""
    import uvicorn

    from .service import ServiceConfig, run_service

    config = ServiceConfig(
        data_dir=data_dir,
        listen=listen,
        read_threshold_volts=threshold_volts,
        holdoff_s=holdoff_s,
        scan_period_ms=scan_period_ms,
        clock=clock,
        calibration_file=calibration,
        ui_dir=ui_dir,
    )
    try:
        service = run_service(config)
    except RfgateError as exc:
        _fail(str(exc))
    host, port = config.host_port()
    try:
        uvicorn.run(service.app, host=host, port=port, log_level="info")
    finally:
        service.stop()


@main.command()
@click.argument("script", type=click.Path(exists=True, path_type=Path))
@click.option("--data-dir", type=click.Path(path_type=Path), default=None,
              help="Keep the replayed store here (must be empty) instead of a temp dir.")
@click.option("--threshold-volts", type=float, default=0.50, show_default=True)
@click.option("--holdoff-s", type=float, default=DEFAULT_HOLDOFF_S, show_default=True)
@click.option("--scan-period-ms", type=float, default=DEFAULT_SCAN_PERIOD_S * 1000, show_default=True)
def replay(script, data_dir, threshold_volts, holdoff_s, scan_period_ms):
    """Replay a scenario script and print its access report (CSV)."""
    from .coupling import CouplingCalibration

    if data_dir is not None and data_dir.exists() and any(data_dir.iterdir()):
        _fail(f"--data-dir {data_dir} is not empty; replay needs a fresh store")
    try:
        result = run_scenario(
            script.read_text(encoding="utf-8"),
            data_dir=data_dir,
            calibration=CouplingCalibration.default(threshold_volts),
            holdoff_s=holdoff_s,
            scan_period_s=scan_period_ms / 1000.0,
        )
    except RfgateError as exc:
        _fail(str(exc))
    click.echo(result.report, nl=False)


# -- client commands (talk to a running service)


def _client(url: str) -> httpx.Client:
    return httpx.Client(base_url=url, timeout=10.0)


def _call(url: str, method: str, path: str, **kwargs):
    with _client(url) as client:
        response = client.request(method, path, **kwargs)
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        _fail(f"{response.status_code}: {detail}")
    return response


def _echo_json(response: httpx.Response) -> None:
    click.echo(json.dumps(response.json(), indent=2, ensure_ascii=False))


url_option = click.option("--url", default="http://127.0.0.1:8000", show_default=True,
                          help="Base URL of the running service.")


@main.command()
@url_option
def health(url):
    """Service health check."""
    _echo_json(_call(url, "GET", "/health"))


@main.command()
@url_option
def status(url):
    """Reader connection/scanning status and recent accesses."""
    _echo_json(_call(url, "GET", "/status"))


@main.command("staff-add")
@click.argument("staff_id")
@click.option("--last-name", default="")
@click.option("--first-name", default="")
@click.option("--phone", default="")
@click.option("--kind", type=click.Choice(["staff", "guest"]), default="staff", show_default=True)
@url_option
def staff_add(staff_id, last_name, first_name, phone, kind, url):
    """Register a staff/guest record."""
    _echo_json(_call(url, "POST", "/staff", json={
        "staff_id": staff_id, "last_name": last_name, "first_name": first_name,
        "phone": phone, "kind": kind,
    }))


@main.command("staff-list")
@url_option
def staff_list(url):
    """List registered people."""
    _echo_json(_call(url, "GET", "/staff"))


@main.command()
@click.argument("uid", type=int)
@click.argument("tag_type", type=click.Choice(["staff", "guest"]))
@click.option("--mediated", is_flag=True, help="Write through the reader to the fielded tag.")
@url_option
def program(uid, tag_type, mediated, url):
    """Program a tag with a uid and type."""
    _echo_json(_call(url, "POST", "/tags/program",
                     json={"uid": uid, "tag_type": tag_type, "mediated": mediated}))


@main.command()
@click.argument("staff_id")
@click.argument("uid", type=int)
@url_option
def assign(staff_id, uid, url):
    """Assign a programmed tag to a person."""
    _echo_json(_call(url, "POST", "/assign", json={"staff_id": staff_id, "uid": uid}))


@main.command("reader-config")
@click.argument("reader_id", type=int)
@click.argument("area_id")
@click.option("--allow", multiple=True, help="Restrict the area to these staff ids (repeatable).")
@url_option
def reader_config(reader_id, area_id, allow, url):
    """Assign a reader to a restricted area."""
    _echo_json(_call(url, "POST", "/readers", json={
        "reader_id": reader_id, "area_id": area_id,
        "allowed_staff": list(allow) if allow else None,
    }))


@main.command()
@click.argument("state", type=click.Choice(["on", "off"]))
@url_option
def scan(state, url):
    """Turn reader scanning on or off."""
    _echo_json(_call(url, "POST", "/scan", json={"on": state == "on"}))


@main.command()
@click.argument("uid", type=int)
@click.argument("distance_cm", type=float)
@click.argument("angle_deg", type=float)
@url_option
def place(uid, distance_cm, angle_deg, url):
    """Place a simulated tag in the reader field."""
    _echo_json(_call(url, "POST", "/sim/place",
                     json={"uid": uid, "distance_cm": distance_cm, "angle_deg": angle_deg}))


@main.command()
@click.argument("uid", type=int)
@click.argument("distance_cm", type=float)
@click.argument("angle_deg", type=float)
@click.option("--dwell-s", type=float, default=PRESENT_DWELL_S, show_default=True)
@url_option
def present(uid, distance_cm, angle_deg, dwell_s, url):
    """Present a badge: place it, then auto-remove after the dwell."""
    _echo_json(_call(url, "POST", "/sim/present", json={
        "uid": uid, "distance_cm": distance_cm, "angle_deg": angle_deg, "dwell_s": dwell_s,
    }))


@main.command()
@click.argument("uid", type=int)
@url_option
def remove(uid, url):
    """Remove a simulated tag from the field."""
    _echo_json(_call(url, "POST", "/sim/remove", json={"uid": uid}))


@main.command()
@click.option("--staff-id", default=None)
@click.option("--area-id", default=None)
@click.option("--from", "ts_from", default=None, help="ISO-8601 lower bound (inclusive).")
@click.option("--to", "ts_to", default=None, help="ISO-8601 upper bound (inclusive).")
@click.option("--csv", "as_csv", is_flag=True, help="Print the CSV export instead of JSON.")
@url_option
def report(staff_id, area_id, ts_from, ts_to, as_csv, url):
    """Access report, optionally filtered."""
    params = {}
    if staff_id:
        params["staff_id"] = staff_id
    if area_id:
        params["area_id"] = area_id
    if ts_from:
        params["from"] = ts_from
    if ts_to:
        params["to"] = ts_to
    if as_csv:
        click.echo(_call(url, "GET", "/report.csv", params=params).text, nl=False)
    else:
        _echo_json(_call(url, "GET", "/report", params=params))


@main.command()
@click.argument("seconds", type=float)
@url_option
def advance(seconds, url):
    """Advance the simulated clock (sim clock mode only)."""
    _echo_json(_call(url, "POST", "/clock/advance", json={"seconds": seconds}))


@main.command()
@click.option("--since-seq", type=int, default=0, show_default=True)
@click.option("--limit", type=int, default=0, show_default=True,
              help="Stop after this many events (0 = follow forever).")
@url_option
def watch(since_seq, limit, url):
    """Follow the live event stream (newline-delimited JSON)."""
    params = {"since_seq": since_seq, "limit": limit}
    with _client(url) as client:
        with client.stream("GET", "/events/stream", params=params, timeout=None) as response:
            for line in response.iter_lines():
                if line.strip():
                    click.echo(line)


if __name__ == "__main__":
    main()
