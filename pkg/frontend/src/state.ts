/** View state and its pure transitions.
 *
 * The state is a projection of API responses plus in-flight user input;
 * nothing here recomputes similarities, votes, or violation counts. All
 * transitions return fresh objects so renders can diff by identity.
 */

import type {
  CountersDoc,
  DatasetSummary,
  GroupDoc,
  OrderBody,
  PredictionDoc,
  RespondDoc,
  SessionDoc,
  SuggestionDoc,
  WeightsDoc,
} from "./api.js";

export type SessionNotice = "" | "changed" | "invalidated";

export interface SessionView {
  id: string | null;
  status: string;
  suggestion: SuggestionDoc | null;
  counters: CountersDoc | null;
  notice: SessionNotice;
  busy: boolean;
}

export interface ExplorerView {
  selected: string[];
  prediction: PredictionDoc | null;
  busy: boolean;
}

export interface OrderEditorView {
  groups: GroupDoc[];
  relations: [string, string][];
  error: string;
}

export interface ViewState {
  dataset: DatasetSummary | null;
  target: string | null;
  session: SessionView;
  explorer: ExplorerView;
  weights: WeightsDoc | null;
  order: OrderEditorView;
}

const emptySession: SessionView = {
  id: null,
  status: "",
  suggestion: null,
  counters: null,
  notice: "",
  busy: false,
};

export function initialState(): ViewState {
  return {
    dataset: null,
    target: null,
    session: { ...emptySession },
    explorer: { selected: [], prediction: null, busy: false },
    weights: null,
    order: { groups: [], relations: [], error: "" },
  };
}

export function withDataset(state: ViewState, dataset: DatasetSummary): ViewState {
  return { ...state, dataset, target: dataset.targets[0] ?? null };
}

export function selectTarget(state: ViewState, target: string): ViewState {
  return {
    ...state,
    target,
    session: { ...emptySession },
    explorer: { ...state.explorer, prediction: null },
    weights: null,
  };
}

export function sessionOpened(state: ViewState, doc: SessionDoc): ViewState {
  return {
    ...state,
    session: {
      id: doc.id,
      status: doc.status,
      suggestion: doc.suggestion,
      counters: doc.counters,
      notice: "",
      busy: false,
    },
  };
}

export function sessionAnswered(state: ViewState, doc: RespondDoc): ViewState {
  return {
    ...state,
    session: {
      ...state.session,
      status: doc.status,
      suggestion: doc.suggestion,
      counters: doc.counters,
      notice: "",
      busy: false,
    },
  };
}

/** 409 means someone answered the pending suggestion first; 410 means the
 * target's weights changed under the session. Both keep the id so the
 * user can refresh or close. */
export function sessionFailed(state: ViewState, status: number): ViewState {
  const notice: SessionNotice =
    status === 410 ? "invalidated" : status === 409 ? "changed" : state.session.notice;
  return { ...state, session: { ...state.session, notice, busy: false } };
}

export function sessionClosed(state: ViewState): ViewState {
  return { ...state, session: { ...emptySession } };
}

export function sessionBusy(state: ViewState, busy: boolean): ViewState {
  return { ...state, session: { ...state.session, busy } };
}

export function toggleTag(state: ViewState, tag: string): ViewState {
  const selected = state.explorer.selected.includes(tag)
    ? state.explorer.selected.filter((t) => t !== tag)
    : [...state.explorer.selected, tag];
  const prediction = selected.length > 0 ? state.explorer.prediction : null;
  return { ...state, explorer: { ...state.explorer, selected, prediction } };
}

/** An empty selection never produces a request. */
export function canPredict(state: ViewState): boolean {
  return state.explorer.selected.length > 0 && state.target !== null;
}

export function predictionLoaded(state: ViewState, doc: PredictionDoc): ViewState {
  return { ...state, explorer: { ...state.explorer, prediction: doc, busy: false } };
}

export function explorerBusy(state: ViewState, busy: boolean): ViewState {
  return { ...state, explorer: { ...state.explorer, busy } };
}

export function weightsLoaded(state: ViewState, doc: WeightsDoc): ViewState {
  return { ...state, weights: doc };
}

export function groupAdded(state: ViewState, name: string, members: string[]): ViewState {
  const trimmed = name.trim();
  if (trimmed === "" || members.length === 0) return state;
  const groups = [
    ...state.order.groups.filter((g) => g.name !== trimmed),
    { name: trimmed, members },
  ];
  return { ...state, order: { ...state.order, groups, error: "" } };
}

export function groupRemoved(state: ViewState, name: string): ViewState {
  const groups = state.order.groups.filter((g) => g.name !== name);
  const relations = state.order.relations.filter(
    ([low, high]) => low !== name && high !== name,
  );
  return { ...state, order: { groups, relations, error: "" } };
}

export function relationAdded(state: ViewState, low: string, high: string): ViewState {
  if (low === high) {
    return orderFailed(state, `a group cannot be ordered against itself (${low})`);
  }
  const exists = state.order.relations.some(([a, b]) => a === low && b === high);
  const relations = exists
    ? state.order.relations
    : [...state.order.relations, [low, high] as [string, string]];
  return { ...state, order: { ...state.order, relations, error: "" } };
}

export function relationRemoved(state: ViewState, index: number): ViewState {
  const relations = state.order.relations.filter((_, i) => i !== index);
  return { ...state, order: { ...state.order, relations, error: "" } };
}

export function orderFailed(state: ViewState, error: string): ViewState {
  return { ...state, order: { ...state.order, error } };
}

export function orderSaved(state: ViewState, table: WeightsDoc): ViewState {
  const session = state.session.id !== null
    ? { ...state.session, notice: "invalidated" as SessionNotice }
    : state.session;
  return { ...state, weights: table, session, order: { ...state.order, error: "" } };
}

export function orderBody(state: ViewState): OrderBody {
  return { groups: state.order.groups, order: state.order.relations };
}
