/** DOM wiring: one event-delegation layer over the pure render and
 * state modules. Each user action drives exactly one request; mutation
 * controls are disabled while a request is in flight.
 */

import { ApiError, createClient } from "./api.js";
import {
  canPredict,
  explorerBusy,
  groupAdded,
  groupRemoved,
  initialState,
  orderBody,
  orderFailed,
  orderSaved,
  predictionLoaded,
  relationAdded,
  relationRemoved,
  selectTarget,
  sessionAnswered,
  sessionBusy,
  sessionClosed,
  sessionFailed,
  sessionOpened,
  toggleTag,
  weightsLoaded,
  withDataset,
  type ViewState,
} from "./state.js";
import {
  renderOrderEditor,
  renderPrediction,
  renderSessionPanel,
  renderTagPicker,
  renderTargetOptions,
  renderWeights,
} from "./render.js";

const client = createClient();
let state: ViewState = initialState();
let predictTimer: ReturnType<typeof setTimeout> | undefined;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing #${id}`);
  return found as T;
}

function paint(): void {
  const tags = state.dataset?.tags ?? [];
  element<HTMLSelectElement>("target-select").innerHTML = renderTargetOptions(
    state.dataset?.targets ?? [],
    state.target,
  );
  element("session-panel").innerHTML = renderSessionPanel(state.session, state.target);
  element("tag-picker").innerHTML = renderTagPicker(tags, state.explorer.selected);
  element("prediction-panel").innerHTML = renderPrediction(state.explorer);
  element("weights-panel").innerHTML = renderWeights(state.weights);
  element("order-panel").innerHTML = renderOrderEditor(state.order, tags);
  for (const button of document.querySelectorAll<HTMLButtonElement>(
    "#session-panel button",
  )) {
    button.disabled = state.session.busy;
  }
}

function update(next: ViewState): void {
  state = next;
  paint();
}

function fail(error: unknown): void {
  const message =
    error instanceof ApiError ? error.message : "The service is not reachable.";
  element("status-line").textContent = message;
}

function clearStatus(): void {
  element("status-line").textContent = "";
}

async function reloadWeights(): Promise<void> {
  if (state.target === null) return;
  update(weightsLoaded(state, await client.getWeights(state.target)));
}

function schedulePredict(): void {
  clearTimeout(predictTimer);
  if (!canPredict(state)) return;
  predictTimer = setTimeout(() => {
    void runPredict();
  }, 250);
}

async function runPredict(): Promise<void> {
  if (!canPredict(state) || state.target === null) return;
  update(explorerBusy(state, true));
  try {
    const doc = await client.predict(state.target, state.explorer.selected);
    clearStatus();
    update(predictionLoaded(state, doc));
  } catch (error) {
    update(explorerBusy(state, false));
    fail(error);
  }
}

async function runSessionAction(action: string, vertex: number): Promise<void> {
  if (state.target === null) return;
  update(sessionBusy(state, true));
  try {
    if (action === "open-session") {
      update(sessionOpened(state, await client.openSession(state.target)));
    } else if (action === "close-session" && state.session.id !== null) {
      await client.closeSession(state.session.id);
      update(sessionClosed(state));
    } else if (action === "refresh-session" && state.session.id !== null) {
      update(sessionOpened(state, await client.getSession(state.session.id)));
    } else if (state.session.id !== null) {
      const doc = await client.respond(state.session.id, vertex, action === "accept");
      update(sessionAnswered(state, doc));
    }
    clearStatus();
  } catch (error) {
    if (error instanceof ApiError && (error.status === 409 || error.status === 410)) {
      update(sessionFailed(state, error.status));
    } else {
      update(sessionBusy(state, false));
      fail(error);
    }
  }
}

async function saveOrder(): Promise<void> {
  if (state.target === null) return;
  try {
    const table = await client.putOrder(state.target, orderBody(state));
    clearStatus();
    update(orderSaved(state, table));
  } catch (error) {
    if (error instanceof ApiError) {
      const cycle = error.cycle !== undefined ? ` (${error.cycle.join(" -> ")})` : "";
      update(orderFailed(state, error.detail + cycle));
    } else {
      fail(error);
    }
  }
}

function onClick(event: Event): void {
  const control = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
  if (control === null) return;
  const action = control.dataset.action ?? "";
  const vertex = Number(control.dataset.vertex ?? "-1");
  if (["open-session", "close-session", "refresh-session", "accept", "reject"].includes(action)) {
    if (!state.session.busy) void runSessionAction(action, vertex);
  } else if (action === "add-group") {
    const name = element<HTMLInputElement>("group-name").value;
    const members = element<HTMLInputElement>("group-members")
      .value.split(",")
      .map((part) => part.trim())
      .filter((part) => part !== "");
    update(groupAdded(state, name, members));
  } else if (action === "remove-group") {
    update(groupRemoved(state, control.dataset.name ?? ""));
  } else if (action === "add-relation") {
    const low = element<HTMLSelectElement>("relation-low").value;
    const high = element<HTMLSelectElement>("relation-high").value;
    update(relationAdded(state, low, high));
  } else if (action === "remove-relation") {
    update(relationRemoved(state, Number(control.dataset.index ?? "-1")));
  } else if (action === "save-order") {
    void saveOrder();
  }
}

function onChange(event: Event): void {
  const input = event.target as HTMLElement;
  if (input instanceof HTMLInputElement && input.dataset.action === "toggle-tag") {
    update(toggleTag(state, input.value));
    schedulePredict();
  } else if (input.id === "target-select") {
    const target = (input as HTMLSelectElement).value;
    update(selectTarget(state, target));
    void reloadWeights();
  }
}

async function boot(): Promise<void> {
  document.addEventListener("click", onClick);
  document.addEventListener("change", onChange);
  try {
    update(withDataset(state, await client.getDataset()));
    await reloadWeights();
  } catch (error) {
    fail(error);
  }
}

void boot();
