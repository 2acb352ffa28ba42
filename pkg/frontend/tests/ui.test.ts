import { describe, expect, it } from "vitest";

import { applyLiveEvent, applyReport, applyStaffList, initialState } from "../src/model.js";
import {
  escapeHtml,
  renderLastAccessTable,
  renderLiveTable,
  renderReportTable,
  renderStaffTable,
} from "../src/ui.js";
import type { AccessEventRecord } from "../src/types.js";

function event(seq: number, staff = "JS/729", direction: AccessEventRecord["direction"] = "Enter"): AccessEventRecord {
  return { seq, staff_id: staff, direction, area_id: "Res. Centre", ts: "2021-09-23T15:21:18Z" };
}

describe("view rendering", () => {
  it("report view carries the report window's columns verbatim", () => {
    const html = renderReportTable(initialState());
    for (const column of ["Staff ID", "Access", "Accessed", "Date", "Time"]) {
      expect(html).toContain(`<th>${column}</th>`);
    }
  });

  it("status view carries the status window's columns verbatim", () => {
    const html = renderLastAccessTable(initialState());
    for (const column of ["Staff ID", "Last Access", "Date", "Time"]) {
      expect(html).toContain(`<th>${column}</th>`);
    }
  });

  it("staff view carries the staff table columns verbatim", () => {
    const html = renderStaffTable(initialState());
    for (const column of ["Staff ID", "Tag ID", "Last Name", "First Name", "Phone"]) {
      expect(html).toContain(`<th>${column}</th>`);
    }
  });

  it("renders report rows exactly as the server sent them", () => {
    const rows = [{ staff_id: "JS/729", access: "Left", accessed: "Res. Centre", date: "23/09/2021", time: "16:53:24" }];
    const html = renderReportTable(applyReport(initialState(), rows, ""));
    expect(html).toContain("<td>JS/729</td><td>Left</td><td>Res. Centre</td><td>23/09/2021</td><td>16:53:24</td>");
  });

  it("live table shows the newest events last with split date/time", () => {
    let state = initialState();
    state = applyLiveEvent(state, event(1));
    state = applyLiveEvent(state, event(2, "SS/408", "Denied"));
    const html = renderLiveTable(state);
    expect(html.indexOf("JS/729")).toBeLessThan(html.indexOf("SS/408"));
    expect(html).toContain('class="dir-denied"');
    expect(html).toContain("<td>23/09/2021</td><td>15:21:18</td>");
  });

  it("live table is bounded", () => {
    let state = initialState();
    for (let seq = 1; seq <= 30; seq++) {
      state = applyLiveEvent(state, event(seq));
    }
    const html = renderLiveTable(state, 20);
    expect(html).not.toContain("<td>10</td>");
    expect(html).toContain("<td>30</td>");
  });

  it("escapes markup in user-entered fields", () => {
    const staff = [{ staff_id: "<img>", last_name: 'A"B', first_name: "", phone: "", kind: "staff" as const, tag_uid: null }];
    const html = renderStaffTable(applyStaffList(initialState(), staff));
    expect(html).toContain("&lt;img&gt;");
    expect(html).not.toContain("<img>");
    expect(escapeHtml("a&b")).toBe("a&amp;b");
  });
});
