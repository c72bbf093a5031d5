import type { AppState } from "./state.js";
import type { ChatDebug, ChatTurn, PoolEntry } from "./types.js";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function isChosen(entry: PoolEntry, chosen: PoolEntry): boolean {
  return (
    entry.post_ordinal === chosen.post_ordinal &&
    entry.comment_index === chosen.comment_index
  );
}

export function renderDebugPanel(debug: ChatDebug): string {
  const matched = debug.matched
    .map(
      (m) =>
        `<li class="matched-post">#${m.ordinal} <span class="score">${m.score.toFixed(4)}</span></li>`,
    )
    .join("");
  const pool = debug.pool
    .map((p) => {
      const cls = isChosen(p, debug.chosen) ? "pool-entry chosen" : "pool-entry";
      return (
        `<li class="${cls}">${escapeHtml(p.text)} ` +
        `<span class="pop">pop ${p.popularity}</span></li>`
      );
    })
    .join("");
  return (
    `<details class="debug-panel">` +
    `<summary>retrieval debug</summary>` +
    `<div class="debug-matched"><h4>matched posts</h4><ul>${matched}</ul></div>` +
    `<div class="debug-pool"><h4>candidate pool</h4><ul>${pool}</ul></div>` +
    `</details>`
  );
}

export function renderTurn(turn: ChatTurn): string {
  const query = `<div class="bubble query">${escapeHtml(turn.query)}</div>`;
  if (turn.status === "pending") {
    return `${query}<div class="bubble response pending">…</div>`;
  }
  if (turn.status === "error") {
    return (
      `${query}<div class="bubble error">request failed: ` +
      `${escapeHtml(turn.errorMessage ?? "unknown error")}</div>`
    );
  }
  const badge = turn.lowConfidence
    ? `<span class="badge low-confidence">low confidence</span>`
    : "";
  const debug = turn.debug ? renderDebugPanel(turn.debug) : "";
  return (
    `${query}<div class="bubble response">` +
    `${escapeHtml(turn.responseText ?? "")}${badge}</div>${debug}`
  );
}

export function renderTranscript(state: AppState): string {
  return state.turns
    .map((t) => `<div class="turn">${renderTurn(t)}</div>`)
    .join("");
}
