"""HTTP API over one dataset file: prediction, weights, review sessions.

Similarities cross the wire as exact fraction strings ("5/6"), never
floats, so clients render precisely what the engine computed. Read
endpoints serve from the in-memory dataset; mutations (session responds,
weight updates, saves) serialize behind locks. Replacing a target's tag
order invalidates that target's open sessions instead of rebuilding their
graphs mid-review; invalidated sessions answer 410 from then on.

Accepted review flips reach the dataset file when the session is closed
(DELETE) or after every accept if the session was opened with
``?autosave=1``. A session id is random and unguessable; concurrent
responds to one session serialize, and whichever lands second sees the
pending suggestion already answered and gets 409.

No authentication: this is a local, single-user tool by design.
"""

from __future__ import annotations

import secrets
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .errors import (
    CyclicOrder,
    EmptyScenario,
    StaleSuggestion,
    TagPolicyError,
    UnknownTag,
)
from .model import make_scenario
from .persistence import (
    config_from_document,
    import_csv,
    load_dataset,
    save_dataset,
    weight_table_document,
)
from .predictor import predict, prediction_document
from .review import DEFAULT_CAP, ReviewSession, Suggestion
from .weights import DatasetWeights, resolve_table


class _SessionEntry:
    def __init__(self, session: ReviewSession, autosave: bool):
        self.session = session
        self.autosave = autosave
        self.invalidated = False
        self.lock = threading.Lock()


class _Store:
    """The dataset, its backing file, and all open sessions."""

    def __init__(self, dataset_path: str | Path):
        path = Path(dataset_path)
        if path.suffix == ".csv":
            self.dataset = import_csv(path)
            self.path = path.with_suffix(".json")
        else:
            self.dataset = load_dataset(path)
            self.path = path
        self.sessions: dict[str, _SessionEntry] = {}
        self.write_lock = threading.Lock()

    def save(self) -> None:
        with self.write_lock:
            save_dataset(self.dataset, self.path)

    def require_target(self, target: str) -> str:
        if target not in self.dataset.targets:
            raise HTTPException(400, {"error": "UnknownTarget", "detail": target})
        return target

    def require_session(self, session_id: str) -> _SessionEntry:
        entry = self.sessions.get(session_id)
        if entry is None:
            raise HTTPException(404, {"error": "UnknownSession", "detail": session_id})
        if entry.invalidated:
            raise HTTPException(
                410,
                {
                    "error": "SessionInvalidated",
                    "detail": "the target's weights changed; open a new session",
                },
            )
        return entry


class PredictBody(BaseModel):
    scenario: list[str]


class RespondBody(BaseModel):
    vertex: int
    accept: bool


class OrderBody(BaseModel):
    groups: list[dict]
    order: list[list[str]]


def _suggestion_document(suggestion: Suggestion | None) -> dict | None:
    if suggestion is None:
        return None
    return {
        "vertex": suggestion.vertex,
        "scenario": list(suggestion.scenario.names),
        "current": suggestion.current.word,
        "proposed": suggestion.proposed.word,
        "delta": suggestion.delta,
    }


def _counters(session: ReviewSession) -> dict:
    return {
        "issued": session.issued_count,
        "accepted": session.accepted_count,
        "rejected": session.rejected_count,
        "remaining_violations": session.remaining_violations,
    }


def _session_document(session_id: str, entry: _SessionEntry) -> dict:
    session = entry.session
    return {
        "id": session_id,
        "target": session.target,
        "status": session.status.value,
        "suggestion": _suggestion_document(session.next_suggestion()),
        "counters": _counters(session),
    }


def create_app(dataset_path: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    store = _Store(dataset_path)
    app = FastAPI(title="tagpolicy service")
    app.state.store = store

    @app.get("/api/dataset")
    def get_dataset() -> dict:
        return {
            "tags": list(store.dataset.universe.names),
            "targets": list(store.dataset.targets),
            "rows": len(store.dataset.rows),
        }

    @app.post("/api/targets/{target}/predict")
    def http_predict(target: str, body: PredictBody) -> dict:
        store.require_target(target)
        try:
            query = make_scenario(store.dataset.universe, body.scenario)
        except EmptyScenario as err:
            raise HTTPException(422, {"error": "EmptyScenario", "detail": str(err)})
        except UnknownTag as err:
            raise HTTPException(400, {"error": "UnknownTag", "detail": str(err)})
        labeled = store.dataset.per_target_view(target)
        table = resolve_table(store.dataset, target)
        prediction = predict(query, labeled, table)
        return prediction_document(prediction, query, labeled)

    @app.get("/api/targets/{target}/weights")
    def http_weights(target: str) -> dict:
        store.require_target(target)
        table = resolve_table(store.dataset, target)
        return weight_table_document(table, store.dataset.universe)

    @app.put("/api/targets/{target}/order")
    def http_order(target: str, body: OrderBody) -> dict:
        store.require_target(target)
        raw = {"groups": body.groups, "order": body.order}
        try:
            config = config_from_document(raw, store.dataset.universe, "order")
            weights = store.dataset.weights
            per_target = dict(weights.per_target)
            if config is None or (not config.groups and not config.relations):
                per_target.pop(target, None)
            else:
                per_target[target] = config
            candidate = DatasetWeights(weights.global_config, per_target)
            candidate.validate(store.dataset.universe, store.dataset.targets)
        except CyclicOrder as err:
            raise HTTPException(
                400, {"error": "CyclicOrder", "detail": str(err), "cycle": err.path}
            )
        except TagPolicyError as err:
            raise HTTPException(400, {"error": type(err).__name__, "detail": str(err)})
        with store.write_lock:
            store.dataset.weights = candidate
            for entry in store.sessions.values():
                if entry.session.target == target:
                    entry.invalidated = True
            save_dataset(store.dataset, store.path)
        table = resolve_table(store.dataset, target)
        return weight_table_document(table, store.dataset.universe)

    @app.post("/api/targets/{target}/sessions")
    def open_session(target: str, cap: int = DEFAULT_CAP, autosave: int = 0) -> dict:
        store.require_target(target)
        try:
            session = ReviewSession(store.dataset, target, cap=cap)
        except TagPolicyError as err:
            raise HTTPException(400, {"error": type(err).__name__, "detail": str(err)})
        session_id = secrets.token_hex(16)
        store.sessions[session_id] = _SessionEntry(session, autosave=bool(autosave))
        return _session_document(session_id, store.sessions[session_id])

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _session_document(session_id, store.require_session(session_id))

    @app.post("/api/sessions/{session_id}/respond")
    def respond(session_id: str, body: RespondBody) -> dict:
        entry = store.require_session(session_id)
        with entry.lock:
            try:
                next_suggestion = entry.session.respond(body.vertex, body.accept)
            except StaleSuggestion as err:
                raise HTTPException(
                    409, {"error": "StaleSuggestion", "detail": str(err)}
                )
            if body.accept and entry.autosave:
                store.save()
        return {
            "suggestion": _suggestion_document(next_suggestion),
            "counters": _counters(entry.session),
            "status": entry.session.status.value,
        }

    @app.delete("/api/sessions/{session_id}")
    def close_session(session_id: str) -> dict:
        # Invalidated sessions may still be closed (cleanup path).
        entry = store.sessions.get(session_id)
        if entry is None:
            raise HTTPException(404, {"error": "UnknownSession", "detail": session_id})
        with entry.lock:
            entry.session.close()
            counters = _counters(entry.session)
            if entry.session.accepted_count > 0:
                store.save()
            del store.sessions[session_id]
        return {"closed": True, "counters": counters}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")

    return app
