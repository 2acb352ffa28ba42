// Thin typed client for the rfgate service.  Exactly one request per
// action; errors surface the server's detail message.

import type {
  ReaderConfig,
  ReportFilter,
  ReportRow,
  StaffRecord,
  StatusResponse,
  TagRecord,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis)
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).detail ?? text;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(response.status, detail);
    }
    return (text ? JSON.parse(text) : undefined) as T;
  }

  health(): Promise<{ status: string; kernel: string; clock: string }> {
    return this.request("GET", "/health");
  }

  status(): Promise<StatusResponse> {
    return this.request("GET", "/status");
  }

  listStaff(): Promise<StaffRecord[]> {
    return this.request("GET", "/staff");
  }

  addStaff(record: {
    staff_id: string;
    last_name?: string;
    first_name?: string;
    phone?: string;
    kind?: "staff" | "guest";
  }): Promise<StaffRecord> {
    return this.request("POST", "/staff", record);
  }

  programTag(uid: number, tagType: "staff" | "guest", mediated = false): Promise<TagRecord> {
    return this.request("POST", "/tags/program", { uid, tag_type: tagType, mediated });
  }

  assignTag(staffId: string, uid: number): Promise<StaffRecord> {
    return this.request("POST", "/assign", { staff_id: staffId, uid });
  }

  configureReader(readerId: number, areaId: string): Promise<ReaderConfig> {
    return this.request("POST", "/readers", { reader_id: readerId, area_id: areaId });
  }

  setScan(on: boolean): Promise<{ scanning: boolean }> {
    return this.request("POST", "/scan", { on });
  }

  placeTag(uid: number, distanceCm: number, angleDeg: number): Promise<unknown> {
    return this.request("POST", "/sim/place", {
      uid,
      distance_cm: distanceCm,
      angle_deg: angleDeg,
    });
  }

  presentTag(uid: number, distanceCm: number, angleDeg: number): Promise<unknown> {
    return this.request("POST", "/sim/present", {
      uid,
      distance_cm: distanceCm,
      angle_deg: angleDeg,
    });
  }

  removeTag(uid: number): Promise<unknown> {
    return this.request("POST", "/sim/remove", { uid });
  }

  advanceClock(seconds: number): Promise<{ now: string }> {
    return this.request("POST", "/clock/advance", { seconds });
  }

  static reportQuery(filter: ReportFilter): string {
    const params = new URLSearchParams();
    if (filter.staffId) params.set("staff_id", filter.staffId);
    if (filter.areaId) params.set("area_id", filter.areaId);
    if (filter.from) params.set("from", filter.from);
    if (filter.to) params.set("to", filter.to);
    const query = params.toString();
    return query ? `?${query}` : "";
  }

  report(filter: ReportFilter): Promise<{ rows: ReportRow[] }> {
    return this.request("GET", "/report" + ApiClient.reportQuery(filter));
  }

  async reportCsv(filter: ReportFilter): Promise<string> {
    const response = await this.fetchImpl(
      this.baseUrl + "/report.csv" + ApiClient.reportQuery(filter)
    );
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return response.text();
  }
}
