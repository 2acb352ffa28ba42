// Cross-implementation parity: fixtures are generated by the Python side
// (see tests/fixtures/); the console must read and re-emit them byte-for-byte.

import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { REPORT_HEADER, parseReportCsv, rowsToCsv } from "../src/csv.js";

const fixtureCsv = readFileSync(new URL("./fixtures/report_fixture.csv", import.meta.url), "utf-8");
const fixtureJson = JSON.parse(
  readFileSync(new URL("./fixtures/report_fixture.json", import.meta.url), "utf-8")
);

describe("report CSV codec", () => {
  it("parses the server-generated report into the API row shape", () => {
    const rows = parseReportCsv(fixtureCsv);
    expect(rows).toEqual(fixtureJson.rows);
    expect(rows).toHaveLength(16);
    expect(rows[0]).toEqual({
      staff_id: "JS/729",
      access: "Left",
      accessed: "Res. Centre",
      date: "23/09/2021",
      time: "16:53:24",
    });
  });

  it("re-serializes byte-for-byte (export parity with the CLI)", () => {
    expect(rowsToCsv(parseReportCsv(fixtureCsv))).toBe(fixtureCsv);
  });

  it("handles an empty report", () => {
    expect(parseReportCsv(REPORT_HEADER + "\n")).toEqual([]);
    expect(rowsToCsv([])).toBe(REPORT_HEADER + "\n");
  });

  it("round-trips quoted fields", () => {
    const rows = [
      { staff_id: "SS/1", access: "Enter", accessed: "Lab, East", date: "01/01/2022", time: "09:00:00" },
      { staff_id: 'Q"Q', access: "Left", accessed: "Lab", date: "01/01/2022", time: "10:00:00" },
    ];
    expect(parseReportCsv(rowsToCsv(rows))).toEqual(rows);
  });

  it("rejects foreign headers", () => {
    expect(() => parseReportCsv("Who,What\n")).toThrow(/unexpected report header/);
  });
});
