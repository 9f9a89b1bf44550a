// Browser wiring: token login, hash routing between the CHW game screen
// (entry form, quest map, leaderboard) and the supervisor dashboard.
// All state flows through the ApiClient; the outbox persists in
// localStorage across reloads.

import { ApiClient } from "./api.js";
import { renderAlertQueue, renderEfficiencyTable, renderLeaderboard } from "./dashboard.js";
import { previewZ, queueEntry, type EntryInput, type RowCache } from "./entryForm.js";
import { fmtZ, classBadge } from "./format.js";
import { renderHotspotMap, renderQuestMap } from "./maps.js";
import { Outbox } from "./outbox.js";
import { t } from "./strings.js";
import type { ChildPayload } from "./types.js";

const appEl = () => document.getElementById("app")!;

interface Session {
  api: ApiClient;
  chwId: string | null;       // null for supervisors
  outbox: Outbox;
  rowCache: Map<string, RowCache>;
  children: ChildPayload[];
}

let session: Session | null = null;

function numOrNull(value: string): number | null {
  const trimmed = value.trim();
  if (!trimmed) return null;
  const n = Number(trimmed);
  return Number.isFinite(n) ? n : null;
}

async function login(token: string, chwId: string): Promise<void> {
  const api = new ApiClient("", token);
  await api.healthz();
  const children = (await api.children()).children;
  session = {
    api,
    chwId: chwId || null,
    outbox: new Outbox(window.localStorage),
    rowCache: new Map(),
    children,
  };
  window.localStorage.setItem("nutriquest.token", token);
  window.localStorage.setItem("nutriquest.chw", chwId);
  route();
}

function renderLogin(): void {
  appEl().innerHTML = `
    <h1>${t("app.title")}</h1>
    <p>${t("login.prompt")}</p>
    <input id="token" placeholder="token"/>
    <input id="chw" placeholder="chw id (blank for supervisor)"/>
    <button id="login">Sign in</button>
    <p id="login-error" class="error"></p>`;
  document.getElementById("login")!.addEventListener("click", async () => {
    const token = (document.getElementById("token") as HTMLInputElement).value;
    const chw = (document.getElementById("chw") as HTMLInputElement).value;
    try {
      await login(token, chw);
    } catch (err) {
      document.getElementById("login-error")!.textContent = String(err);
    }
  });
}

function entryInputFromForm(): EntryInput {
  return {
    childId: (document.getElementById("child") as HTMLSelectElement).value,
    weight: numOrNull((document.getElementById("weight") as HTMLInputElement).value),
    height: numOrNull((document.getElementById("height") as HTMLInputElement).value),
    heightMode: (document.getElementById("height-mode") as HTMLSelectElement)
      .value as "standing" | "recumbent",
    muac: numOrNull((document.getElementById("muac") as HTMLInputElement).value),
  };
}

async function renderEntry(): Promise<void> {
  const s = session!;
  const options = s.children
    .map((c) => `<option value="${c.id}">${c.id} (${c.sex})</option>`).join("");
  appEl().innerHTML = `
    <h2>${t("entry.title")}</h2>
    <label>Child <select id="child">${options}</select></label>
    <label>Weight kg <input id="weight" inputmode="decimal"/></label>
    <label>Height cm <input id="height" inputmode="decimal"/></label>
    <label>Mode <select id="height-mode">
      <option value="standing">standing (stadiometer)</option>
      <option value="recumbent">recumbent (infantometer)</option>
    </select></label>
    <label>MUAC mm <input id="muac" inputmode="decimal"/></label>
    <button id="preview">${t("entry.preview")}</button>
    <button id="queue">Queue</button>
    <button id="sync">Sync now</button>
    <div id="zresult"></div>
    <p id="outbox-state">${s.outbox.size()} ${t("outbox.pending")}</p>
    <p id="entry-error" class="error"></p>`;
  const started = Date.now();
  document.getElementById("preview")!.addEventListener("click", async () => {
    const errEl = document.getElementById("entry-error")!;
    errEl.textContent = "";
    try {
      const result = await previewZ(s.api, entryInputFromForm(), s.rowCache);
      const z = result.z;
      const label = result.source === "estimate"
        ? `<strong class="estimate">${t("entry.estimate_label")}</strong>` : "";
      const cls = "classification" in z && z.classification
        ? `<p>stunting ${classBadge(z.classification.stunting)},
             wasting ${classBadge(z.classification.wasting)},
             underweight ${classBadge(z.classification.underweight)},
             MUAC ${classBadge(z.classification.muac_band)}</p>` : "";
      document.getElementById("zresult")!.innerHTML = `${label}
        <p data-role="z-values">WAZ ${fmtZ(z.waz)} | HAZ ${fmtZ(z.haz)} |
           WHZ ${fmtZ(z.whz)} | MUAC-Z ${fmtZ(z.muacz)}</p>${cls}`;
    } catch (err) {
      errEl.textContent = String(err);
    }
  });
  document.getElementById("queue")!.addEventListener("click", () => {
    const errEl = document.getElementById("entry-error")!;
    errEl.textContent = "";
    try {
      const input = entryInputFromForm();
      input.entryDurationS = (Date.now() - started) / 1000;
      const child = s.children.find((c) => c.id === input.childId);
      queueEntry(s.outbox, input, s.chwId ?? "", {
        lat: child?.home_lat ?? 0, lon: child?.home_lon ?? 0,
      });
      document.getElementById("outbox-state")!.textContent =
        `${s.outbox.size()} ${t("outbox.pending")}`;
    } catch (err) {
      errEl.textContent = String(err);
    }
  });
  document.getElementById("sync")!.addEventListener("click", async () => {
    const result = await s.outbox.flush(s.api, s.chwId ?? "");
    document.getElementById("outbox-state")!.textContent =
      `${result.remaining} ${t("outbox.pending")} ` +
      `(accepted ${result.accepted}, duplicate ${result.duplicate})`;
  });
}

async function renderMap(): Promise<void> {
  const s = session!;
  try {
    const [coverage, quests] = await Promise.all([
      s.api.coverage(),
      s.api.quests(s.chwId ?? undefined),
    ]);
    window.localStorage.setItem("nutriquest.cache.coverage",
                                JSON.stringify(coverage));
    const map = renderQuestMap(coverage, quests.quests, null);
    appEl().innerHTML = `<h2>${t("map.title")}</h2>${map.svg}
      <p>${quests.quests.length} active quest(s)</p>`;
  } catch {
    const cached = window.localStorage.getItem("nutriquest.cache.coverage");
    if (cached) {
      const map = renderQuestMap(JSON.parse(cached), [], null);
      appEl().innerHTML = `<h2>${t("map.title")}</h2>
        <p class="estimate">showing cached layer (offline)</p>${map.svg}`;
    } else {
      appEl().innerHTML = `<p class="error">map unavailable offline</p>`;
    }
  }
}

async function renderBoard(): Promise<void> {
  const s = session!;
  const board = await s.api.leaderboard();
  appEl().innerHTML = `<h2>${t("board.title")}</h2>${renderLeaderboard(board)}`;
}

async function renderDashboard(): Promise<void> {
  const s = session!;
  const [alerts, hotspot] = await Promise.all([
    s.api.alerts(), s.api.hotspots("gistar"),
  ]);
  const scores = [];
  for (const chwId of new Set(s.children.map((c) => c.chw_id))) {
    scores.push(await s.api.efficiency(chwId));
  }
  const map = renderHotspotMap(hotspot, "gistar");
  appEl().innerHTML = `<h2>${t("dashboard.title")}</h2>
    <div>
      <button id="layer-gistar">${t("dashboard.layer.gistar")}</button>
      <button id="layer-density">${t("dashboard.layer.density")}</button>
    </div>
    <div id="hotspot-map">${map.svg}</div>
    <h3>Alert queue</h3><div id="alerts">${renderAlertQueue(alerts.alerts)}</div>
    <h3>Efficiency</h3>${renderEfficiencyTable(scores)}`;
  document.getElementById("layer-density")!.addEventListener("click", async () => {
    const layer = await s.api.hotspots("density");
    document.getElementById("hotspot-map")!.innerHTML =
      renderHotspotMap(layer, "density").svg;
  });
  document.getElementById("layer-gistar")!.addEventListener("click", async () => {
    const layer = await s.api.hotspots("gistar");
    document.getElementById("hotspot-map")!.innerHTML =
      renderHotspotMap(layer, "gistar").svg;
  });
  document.getElementById("alerts")!.addEventListener("click", async (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset.action !== "resolve") return;
    await s.api.resolveAlert(target.dataset.alertId!,
                             target.dataset.resolution as "confirmed" | "dismissed");
    const refreshed = await s.api.alerts();
    document.getElementById("alerts")!.innerHTML =
      renderAlertQueue(refreshed.alerts);
  });
}

function route(): void {
  if (!session) {
    renderLogin();
    return;
  }
  const hash = window.location.hash || "#entry";
  if (hash === "#map") void renderMap();
  else if (hash === "#board") void renderBoard();
  else if (hash === "#dashboard") void renderDashboard();
  else void renderEntry();
}

window.addEventListener("hashchange", route);
window.addEventListener("online", () => {
  if (session?.chwId) void session.outbox.flush(session.api, session.chwId);
});
window.addEventListener("DOMContentLoaded", () => {
  const token = window.localStorage.getItem("nutriquest.token");
  const chw = window.localStorage.getItem("nutriquest.chw") ?? "";
  if (token) {
    void login(token, chw).catch(() => renderLogin());
  } else {
    renderLogin();
  }
});
