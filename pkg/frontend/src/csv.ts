// Report CSV handling.  The console never re-renders report data itself:
// the displayed rows come from the server and the exported bytes must be
// identical to what `rfgate report --csv` prints for the same filter.

import type { ReportRow } from "./types.js";

export const REPORT_HEADER = "Staff ID,Access,Accessed,Date,Time";

function splitCsvLine(line: string): string[] {
  const fields: string[] = [];
  let current = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') {
        current += '"';
        i++;
      } else if (ch === '"') {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      fields.push(current);
      current = "";
    } else {
      current += ch;
    }
  }
  fields.push(current);
  return fields;
}

function quoteField(field: string): string {
  if (/[",\n\r]/.test(field)) {
    return `"${field.replaceAll('"', '""')}"`;
  }
  return field;
}

export function parseReportCsv(text: string): ReportRow[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0 || lines[0] !== REPORT_HEADER) {
    throw new Error(`unexpected report header: ${lines[0] ?? "(empty)"}`);
  }
  return lines.slice(1).map((line) => {
    const fields = splitCsvLine(line);
    if (fields.length !== 5) {
      throw new Error(`bad report row: ${line}`);
    }
    const [staff_id, access, accessed, date, time] = fields as [string, string, string, string, string];
    return { staff_id, access, accessed, date, time };
  });
}

export function rowsToCsv(rows: ReportRow[]): string {
  const lines = [REPORT_HEADER];
  for (const row of rows) {
    lines.push(
      [row.staff_id, row.access, row.accessed, row.date, row.time].map(quoteField).join(",")
    );
  }
  return lines.join("\n") + "\n";
}
