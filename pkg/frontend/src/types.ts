// Wire shapes of the rfgate HTTP API; see STORAGE.md and the service routes.

export interface AccessEventRecord {
  seq: number;
  staff_id: string;
  direction: "Enter" | "Left" | "Denied";
  area_id: string;
  ts: string; // ISO-8601 UTC
}

export interface StaffRecord {
  staff_id: string;
  last_name: string;
  first_name: string;
  phone: string;
  kind: "staff" | "guest";
  tag_uid: number | null;
}

export interface TagRecord {
  uid: number;
  family: string;
  tag_type: "staff" | "guest" | null;
  programmed: boolean;
}

export interface ReaderConfig {
  reader_id: number;
  area_id: string;
  allowed_staff: string[] | null;
}

export interface FieldTag {
  uid: number;
  distance_cm: number;
  angle_deg: number;
}

export interface StatusResponse {
  connected: boolean;
  scanning: boolean;
  clock: "real" | "sim";
  now: string;
  kernel: string;
  link_defects: number;
  recent_events: AccessEventRecord[];
  last_access: Record<string, AccessEventRecord>;
  field: FieldTag[];
}

// One row of the server-rendered report (GET /report).
export interface ReportRow {
  staff_id: string;
  access: string;
  accessed: string;
  date: string; // dd/mm/yyyy, as rendered by the server
  time: string; // HH:MM:SS
}

export interface ReportFilter {
  staffId?: string;
  areaId?: string;
  from?: string;
  to?: string;
}
