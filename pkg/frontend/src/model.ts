// Console view-model: plain state plus pure update functions.
//
// Everything here derives from API responses and the event stream; the
// console performs no business logic of its own (directions, alternation,
// report formatting all come from the server).

import type {
  AccessEventRecord,
  FieldTag,
  ReportFilter,
  ReportRow,
  StaffRecord,
  StatusResponse,
} from "./types.js";

export interface SimControls {
  uid: number | null;
  distanceCm: number; // slider 25..200
  angleDeg: number; // slider 0..180
}

export interface ConsoleState {
  connected: boolean;
  scanning: boolean;
  clock: string;
  now: string;
  kernel: string;
  events: AccessEventRecord[]; // seq order, newest last
  lastAccess: Record<string, AccessEventRecord>;
  staff: StaffRecord[];
  field: FieldTag[];
  report: ReportRow[];
  reportCsv: string; // raw server bytes for export
  filter: ReportFilter;
  sim: SimControls;
  error: string | null;
}

export function initialState(): ConsoleState {
  return {
    connected: false,
    scanning: false,
    clock: "",
    now: "",
    kernel: "",
    events: [],
    lastAccess: {},
    staff: [],
    field: [],
    report: [],
    reportCsv: "",
    filter: {},
    sim: { uid: null, distanceCm: 25, angleDeg: 0 },
    error: null,
  };
}

export function applyStatus(state: ConsoleState, status: StatusResponse): ConsoleState {
  return {
    ...state,
    connected: status.connected,
    scanning: status.scanning,
    clock: status.clock,
    now: status.now,
    kernel: status.kernel,
    lastAccess: status.last_access,
    field: status.field,
  };
}

/** Insert a live event; out-of-order or repeated seqs are dropped. */
export function applyLiveEvent(state: ConsoleState, event: AccessEventRecord): ConsoleState {
  const last = state.events[state.events.length - 1];
  if (last !== undefined && event.seq <= last.seq) {
    return state;
  }
  return {
    ...state,
    events: [...state.events, event],
    lastAccess: { ...state.lastAccess, [event.staff_id]: event },
  };
}

export function applyStaffList(state: ConsoleState, staff: StaffRecord[]): ConsoleState {
  return { ...state, staff };
}

export function applyReport(state: ConsoleState, rows: ReportRow[], csv: string): ConsoleState {
  return { ...state, report: rows, reportCsv: csv };
}

export function setFilter(state: ConsoleState, filter: ReportFilter): ConsoleState {
  return { ...state, filter };
}

export function setSim(state: ConsoleState, sim: Partial<SimControls>): ConsoleState {
  return { ...state, sim: { ...state.sim, ...sim } };
}

export function setError(state: ConsoleState, error: string | null): ConsoleState {
  return { ...state, error };
}

/** Display split of an ISO UTC instant into the table's Date/Time columns. */
export function splitTimestamp(ts: string): { date: string; time: string } {
  const match = /^(\d{4})-(\d{2})-(\d{2})T(\d{2}:\d{2}:\d{2})/.exec(ts);
  if (!match) {
    return { date: ts, time: "" };
  }
  const [, year, month, day, time] = match;
  return { date: `${day}/${month}/${year}`, time: time ?? "" };
}
