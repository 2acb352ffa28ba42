// HTML renderers for the console views.  Pure string producers so they can
// be tested without a DOM; main.ts assigns them into the page.

import type { ConsoleState } from "./model.js";
import { splitTimestamp } from "./model.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function td(value: string | number): string {
  return `<td>${escapeHtml(String(value))}</td>`;
}

export function renderStatusBadges(state: ConsoleState): string {
  const link = state.connected ? "connected" : "disconnected";
  const scan = state.scanning ? "scanning" : "idle";
  return (
    `<span class="badge ${state.connected ? "ok" : "bad"}">Reader: ${link}</span>` +
    `<span class="badge ${state.scanning ? "ok" : "off"}">Scan: ${scan}</span>` +
    `<span class="badge">Clock: ${escapeHtml(state.clock)} ${escapeHtml(state.now)}</span>`
  );
}

/** Per-person latest movement, newest first. */
export function renderLastAccessTable(state: ConsoleState): string {
  const rows = Object.values(state.lastAccess)
    .sort((a, b) => b.seq - a.seq)
    .map((event) => {
      const { date, time } = splitTimestamp(event.ts);
      return `<tr>${td(event.staff_id)}${td(event.direction)}${td(date)}${td(time)}</tr>`;
    });
  return (
    "<table><thead><tr><th>Staff ID</th><th>Last Access</th><th>Date</th><th>Time</th></tr></thead>" +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

/** Rolling live feed, newest last (mirrors the stream order). */
export function renderLiveTable(state: ConsoleState, maxRows = 20): string {
  const rows = state.events.slice(-maxRows).map((event) => {
    const { date, time } = splitTimestamp(event.ts);
    return (
      `<tr class="dir-${event.direction.toLowerCase()}">` +
      `${td(event.seq)}${td(event.staff_id)}${td(event.direction)}${td(event.area_id)}${td(date)}${td(time)}</tr>`
    );
  });
  return (
    "<table><thead><tr><th>#</th><th>Staff ID</th><th>Access</th><th>Accessed</th><th>Date</th><th>Time</th></tr></thead>" +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

export function renderStaffTable(state: ConsoleState): string {
  const rows = state.staff.map(
    (s) =>
      `<tr>${td(s.staff_id)}${td(s.tag_uid ?? "")}${td(s.last_name)}${td(s.first_name)}${td(s.phone)}</tr>`
  );
  return (
    "<table><thead><tr><th>Staff ID</th><th>Tag ID</th><th>Last Name</th><th>First Name</th><th>Phone</th></tr></thead>" +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

/** Report view: rows exactly as the server rendered them. */
export function renderReportTable(state: ConsoleState): string {
  const rows = state.report.map(
    (row) =>
      `<tr>${td(row.staff_id)}${td(row.access)}${td(row.accessed)}${td(row.date)}${td(row.time)}</tr>`
  );
  return (
    "<table><thead><tr><th>Staff ID</th><th>Access</th><th>Accessed</th><th>Date</th><th>Time</th></tr></thead>" +
    `<tbody>${rows.join("")}</tbody></table>`
  );
}

export function renderFieldList(state: ConsoleState): string {
  if (state.field.length === 0) {
    return "<em>no tags in field</em>";
  }
  return state.field
    .map(
      (tag) =>
        `<span class="badge">uid ${tag.uid} @ ${tag.distance_cm} cm / ${tag.angle_deg}&deg;</span>`
    )
    .join(" ");
}
