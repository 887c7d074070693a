/** Pure HTML renderers over the view state.
 *
 * Every dynamic string is escaped; similarity strings from the API are
 * rendered character-identical inside <code> elements. Interactive
 * elements carry data-action attributes for the event delegation in
 * main.ts; no listener is attached here.
 */

import type { CountersDoc, PredictionDoc, SuggestionDoc, WeightsDoc } from "./api.js";
import type { ExplorerView, OrderEditorView, SessionView } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

function scenarioText(names: string[]): string {
  return names.join("+");
}

export function renderTargetOptions(targets: string[], selected: string | null): string {
  return targets
    .map((name) => {
      const attr = name === selected ? " selected" : "";
      return `<option value="${escapeHtml(name)}"${attr}>${escapeHtml(name)}</option>`;
    })
    .join("");
}

export function renderCounters(counters: CountersDoc): string {
  return (
    `<dl class="counters">` +
    `<div><dt>answered</dt><dd>${counters.accepted + counters.rejected}</dd></div>` +
    `<div><dt>accepted</dt><dd data-counter="accepted">${counters.accepted}</dd></div>` +
    `<div><dt>rejected</dt><dd>${counters.rejected}</dd></div>` +
    `<div><dt>remaining violations</dt>` +
    `<dd data-counter="remaining">${counters.remaining_violations}</dd></div>` +
    `</dl>`
  );
}

function renderSuggestion(suggestion: SuggestionDoc, target: string): string {
  const scenario = suggestion.scenario.map(escapeHtml).join(",");
  const proposed = escapeHtml(suggestion.proposed.toUpperCase());
  const plural = Math.abs(suggestion.delta) === 1 ? "violation" : "violations";
  const effect =
    suggestion.delta > 0
      ? `removes ${suggestion.delta} ${plural}`
      : suggestion.delta === 0
        ? "removes no violations"
        : `adds ${-suggestion.delta} ${plural}`;
  return (
    `<p class="suggestion" data-vertex="${suggestion.vertex}">` +
    `For {${scenario}}, ${escapeHtml(target)} = <strong>${proposed}</strong>. Agree?</p>` +
    `<p class="suggestion-effect">Accepting ${effect}.</p>` +
    `<div class="controls">` +
    `<button data-action="accept" data-vertex="${suggestion.vertex}">Accept</button>` +
    `<button data-action="reject" data-vertex="${suggestion.vertex}">Reject</button>` +
    `</div>`
  );
}

const noticeText: Record<string, string> = {
  changed:
    "This suggestion was already answered elsewhere. Refresh to load the current one.",
  invalidated:
    "The target's weights changed, so this session is stale. Close it and start a new one.",
};

export function renderSessionPanel(session: SessionView, target: string | null): string {
  if (target === null) return `<p class="hint">Load a dataset to review labels.</p>`;
  if (session.id === null) {
    return (
      `<p class="hint">Review walks the labeled examples and proposes the ` +
      `single flip that removes the most inconsistencies.</p>` +
      `<button data-action="open-session">Start review</button>`
    );
  }
  const parts: string[] = [];
  if (session.notice !== "") {
    parts.push(`<p class="notice">${escapeHtml(noticeText[session.notice] ?? "")}</p>`);
    if (session.notice === "changed") {
      parts.push(`<button data-action="refresh-session">Refresh</button>`);
    }
  }
  if (session.notice !== "invalidated") {
    if (session.suggestion !== null) {
      parts.push(renderSuggestion(session.suggestion, target));
    } else if (session.status === "clean") {
      parts.push(`<p class="done">No inconsistencies remain.</p>`);
    } else if (session.status === "exhausted") {
      parts.push(`<p class="done">No more suggestions this session.</p>`);
    }
  }
  if (session.counters !== null) parts.push(renderCounters(session.counters));
  parts.push(`<button data-action="close-session">Close session</button>`);
  return parts.join("");
}

export function renderTagPicker(tags: string[], selected: string[]): string {
  const boxes = tags
    .map((tag) => {
      const checked = selected.includes(tag) ? " checked" : "";
      const name = escapeHtml(tag);
      return (
        `<label class="tag"><input type="checkbox" data-action="toggle-tag" ` +
        `value="${name}"${checked}> ${name}</label>`
      );
    })
    .join("");
  return `<fieldset class="tags">${boxes}</fieldset>`;
}

export function renderPrediction(explorer: ExplorerView): string {
  if (explorer.selected.length === 0) {
    return `<p class="hint">Pick at least one tag to ask for a decision.</p>`;
  }
  if (explorer.busy) return `<p class="hint">Asking...</p>`;
  const doc = explorer.prediction;
  if (doc === null) return "";
  const decision = escapeHtml(doc.decision.toUpperCase());
  const badge = escapeHtml(doc.provenance.replaceAll("_", "-"));
  const neighbors = doc.neighbors
    .map(
      (n) =>
        `<li>${escapeHtml(scenarioText(n.scenario))} ` +
        `(${escapeHtml(n.decision)}) @ <code>${escapeHtml(n.similarity)}</code></li>`,
    )
    .join("");
  const removed =
    doc.removed_row !== null
      ? `<p class="note">Tie broken by removing row ${doc.removed_row}, ` +
        `which does not consider the query a nearest neighbor.</p>`
      : "";
  const unseen =
    doc.unseen_tags.length > 0
      ? `<p class="note">Tags never seen in training: ` +
        `${doc.unseen_tags.map(escapeHtml).join(", ")}.</p>`
      : "";
  return (
    `<div class="prediction">` +
    `<p><strong class="decision decision-${escapeHtml(doc.decision)}">${decision}</strong> ` +
    `<span class="badge badge-${badge}">${badge}</span> ` +
    `at similarity <code>${escapeHtml(doc.similarity)}</code> ` +
    `(vote ${doc.vote.allow} allow / ${doc.vote.deny} deny)</p>` +
    `<ul class="neighbors">${neighbors}</ul>` +
    removed +
    unseen +
    `</div>`
  );
}

export function renderWeights(weights: WeightsDoc | null): string {
  if (weights === null) return "";
  const rows = Object.entries(weights)
    .map(
      ([tag, [w0, w1]]) =>
        `<tr><td>${escapeHtml(tag)}</td><td>${w0}</td><td>${w1}</td></tr>`,
    )
    .join("");
  return (
    `<table class="weights"><thead><tr><th>tag</th><th>w0</th><th>w1</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderOrderEditor(order: OrderEditorView, tags: string[]): string {
  const groups = order.groups
    .map(
      (g) =>
        `<li>${escapeHtml(g.name)} = {${g.members.map(escapeHtml).join(", ")}} ` +
        `<button data-action="remove-group" data-name="${escapeHtml(g.name)}">remove</button></li>`,
    )
    .join("");
  const names = order.groups.map((g) => g.name);
  const options = names
    .map((n) => `<option value="${escapeHtml(n)}">${escapeHtml(n)}</option>`)
    .join("");
  const relations = order.relations
    .map(
      ([low, high], index) =>
        `<li>${escapeHtml(low)} &lt; ${escapeHtml(high)} ` +
        `<button data-action="remove-relation" data-index="${index}">remove</button></li>`,
    )
    .join("");
  const error =
    order.error !== "" ? `<p class="error">${escapeHtml(order.error)}</p>` : "";
  const disabled = names.length < 2 ? " disabled" : "";
  return (
    `<div class="order-editor">` +
    `<ul class="groups">${groups}</ul>` +
    `<p class="row"><input id="group-name" placeholder="group name"> ` +
    `<input id="group-members" placeholder="tags, comma separated" ` +
    `list="tag-names"> ` +
    `<datalist id="tag-names">${tags.map((t) => `<option value="${escapeHtml(t)}">`).join("")}</datalist>` +
    `<button data-action="add-group">Add group</button></p>` +
    `<ul class="relations">${relations}</ul>` +
    `<p class="row"><select id="relation-low">${options}</select> is below ` +
    `<select id="relation-high">${options}</select> ` +
    `<button data-action="add-relation"${disabled}>Add relation</button></p>` +
    error +
    `<button data-action="save-order">Save order</button>` +
    `</div>`
  );
}
