// Supervisor dashboard fragments and the CHW-facing board, rendered as
// HTML strings so the logic stays testable without a DOM.

import type { AlertPayload, EfficiencyPayload, LeaderboardResponse } from "./types.js";
import { fmtPoints, fmtRatio } from "./format.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderAlertQueue(alerts: AlertPayload[]): string {
  if (alerts.length === 0) {
    return `<p class="empty" data-role="alerts-empty">No alerts.</p>`;
  }
  const rows = alerts.map((a) => `
    <tr data-alert="${esc(a.id)}" class="sev-${a.severity}">
      <td>${esc(a.id)}</td>
      <td>${esc(a.kind)}</td>
      <td>${esc(a.severity)}</td>
      <td>${esc(a.chw_id)}</td>
      <td>${esc(a.detail)}</td>
      <td>${a.resolved
        ? esc(a.resolution ?? "resolved")
        : `<button data-action="resolve" data-alert-id="${esc(a.id)}"
             data-resolution="confirmed">confirm</button>
           <button data-action="resolve" data-alert-id="${esc(a.id)}"
             data-resolution="dismissed">dismiss</button>`}</td>
    </tr>`).join("");
  return `<table data-role="alert-queue">
    <thead><tr><th>id</th><th>kind</th><th>severity</th><th>CHW</th>
    <th>evidence</th><th>action</th></tr></thead>
    <tbody>${rows}</tbody></table>`;
}

export function renderEfficiencyTable(scores: EfficiencyPayload[]): string {
  const rows = scores.map((s) => `
    <tr data-chw="${esc(s.chw_id)}">
      <td>${esc(s.chw_id)}</td>
      <td>${fmtPoints(s.composite)}</td>
      <td>${fmtRatio(s.accuracy)}</td>
      <td>${fmtRatio(s.speed)}</td>
      <td>${fmtRatio(s.coverage)}</td>
      <td>${s.n_submissions}</td>
      <td>${s.inactive ? "inactive" : ""}</td>
    </tr>`).join("");
  return `<table data-role="efficiency">
    <thead><tr><th>CHW</th><th>E</th><th>accuracy</th><th>speed</th>
    <th>coverage</th><th>entries</th><th></th></tr></thead>
    <tbody>${rows}</tbody></table>`;
}

export function renderLeaderboard(board: LeaderboardResponse): string {
  const individual = board.individual.map((e) =>
    `<li data-chw="${esc(e.chw_id)}">#${e.rank} ${esc(e.chw_id)} - ` +
    `${fmtPoints(e.points)} pts</li>`).join("");
  const teams = board.teams.map((e) =>
    `<li data-team="${esc(e.team_id)}">#${e.rank} ${esc(e.team_id)} - ` +
    `${fmtPoints(e.points)} pts</li>`).join("");
  return `<div data-role="leaderboard">
    <h3>CHWs</h3><ol>${individual || "<li>no scores yet</li>"}</ol>
    <h3>Teams</h3><ol>${teams || "<li>no teams</li>"}</ol></div>`;
}
