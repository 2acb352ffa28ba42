// Console bootstrap: one ApiClient, one LiveFeed, DOM wiring.
//
// Nothing is shown optimistically: every view updates from a server
// response (or a committed event off the stream), and a page refresh
// rehydrates everything from the API.

import { ApiClient, ApiError } from "./api.js";
import { LiveFeed } from "./feed.js";
import {
  applyLiveEvent,
  applyReport,
  applyStaffList,
  applyStatus,
  initialState,
  setError,
  setFilter,
  setSim,
  type ConsoleState,
} from "./model.js";
import {
  renderFieldList,
  renderLastAccessTable,
  renderLiveTable,
  renderReportTable,
  renderStaffTable,
  renderStatusBadges,
} from "./ui.js";
import { parseReportCsv } from "./csv.js";

const api = new ApiClient("..");
let state: ConsoleState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function update(next: ConsoleState): void {
  state = next;
  el("status-badges").innerHTML = renderStatusBadges(state);
  el("last-access").innerHTML = renderLastAccessTable(state);
  el("live-feed").innerHTML = renderLiveTable(state);
  el("staff-table").innerHTML = renderStaffTable(state);
  el("report-table").innerHTML = renderReportTable(state);
  el("field-list").innerHTML = renderFieldList(state);
  el("error-box").textContent = state.error ?? "";
  el("error-box").hidden = state.error === null;
}

function showError(err: unknown): void {
  const message = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
  update(setError(state, message));
}

async function refreshStatus(): Promise<void> {
  update(applyStatus(state, await api.status()));
}

async function refreshStaff(): Promise<void> {
  update(applyStaffList(state, await api.listStaff()));
}

async function refreshReport(): Promise<void> {
  // fetch the canonical CSV and display exactly what it contains
  const csv = await api.reportCsv(state.filter);
  update(applyReport(state, parseReportCsv(csv), csv));
}

async function action(run: () => Promise<void>): Promise<void> {
  try {
    update(setError(state, null));
    await run();
  } catch (err) {
    showError(err);
  }
}

function wireForms(): void {
  el<HTMLFormElement>("register-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void action(async () => {
      await api.addStaff({
        staff_id: el<HTMLInputElement>("reg-staff-id").value.trim(),
        last_name: el<HTMLInputElement>("reg-last").value.trim(),
        first_name: el<HTMLInputElement>("reg-first").value.trim(),
        phone: el<HTMLInputElement>("reg-phone").value.trim(),
        kind: el<HTMLSelectElement>("reg-kind").value as "staff" | "guest",
      });
      await refreshStaff();
    });
  });

  el<HTMLFormElement>("program-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void action(async () => {
      const uid = Number(el<HTMLInputElement>("prog-uid").value);
      await api.programTag(uid, el<HTMLSelectElement>("prog-type").value as "staff" | "guest");
      const staffId = el<HTMLInputElement>("prog-assign-to").value.trim();
      if (staffId) {
        await api.assignTag(staffId, uid);
      }
      await refreshStaff();
    });
  });

  el<HTMLFormElement>("reader-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void action(async () => {
      await api.configureReader(
        Number(el<HTMLInputElement>("reader-id").value),
        el<HTMLInputElement>("reader-area").value.trim()
      );
      await refreshStatus();
    });
  });

  el("scan-toggle").addEventListener("click", () => {
    void action(async () => {
      await api.setScan(!state.scanning); // server echo decides the badge
      await refreshStatus();
    });
  });

  const distance = el<HTMLInputElement>("sim-distance");
  const angle = el<HTMLInputElement>("sim-angle");
  const updateSliders = () => {
    update(setSim(state, { distanceCm: Number(distance.value), angleDeg: Number(angle.value) }));
    el("sim-distance-value").textContent = `${distance.value} cm`;
    el("sim-angle-value").textContent = `${angle.value}°`;
  };
  distance.addEventListener("input", updateSliders);
  angle.addEventListener("input", updateSliders);
  updateSliders();

  const simUid = () => Number(el<HTMLInputElement>("sim-uid").value);
  el("sim-present").addEventListener("click", () => {
    void action(async () => {
      await api.presentTag(simUid(), state.sim.distanceCm, state.sim.angleDeg);
      await refreshStatus();
    });
  });
  el("sim-place").addEventListener("click", () => {
    void action(async () => {
      await api.placeTag(simUid(), state.sim.distanceCm, state.sim.angleDeg);
      await refreshStatus();
    });
  });
  el("sim-remove").addEventListener("click", () => {
    void action(async () => {
      await api.removeTag(simUid());
      await refreshStatus();
    });
  });
  el("clock-advance").addEventListener("click", () => {
    void action(async () => {
      await api.advanceClock(Number(el<HTMLInputElement>("advance-s").value));
      await refreshStatus();
    });
  });

  el<HTMLFormElement>("report-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void action(async () => {
      update(
        setFilter(state, {
          staffId: el<HTMLInputElement>("filter-staff").value.trim() || undefined,
          areaId: el<HTMLInputElement>("filter-area").value.trim() || undefined,
          from: el<HTMLInputElement>("filter-from").value.trim() || undefined,
          to: el<HTMLInputElement>("filter-to").value.trim() || undefined,
        })
      );
      await refreshReport();
    });
  });

  el("report-export").addEventListener("click", () => {
    const blob = new Blob([state.reportCsv], { type: "text/csv" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "access-report.csv";
    link.click();
    URL.revokeObjectURL(link.href);
  });
}

async function boot(): Promise<void> {
  wireForms();
  await action(async () => {
    await refreshStatus();
    await refreshStaff();
    await refreshReport();
  });
  const feed = new LiveFeed("..", (event) => {
    update(applyLiveEvent(state, event));
  });
  window.addEventListener("beforeunload", () => feed.stop());
  void feed.run();
  // the status panel (clock, field contents) stays fresh even without events
  setInterval(() => void refreshStatus().catch(() => undefined), 5000);
}

void boot();
