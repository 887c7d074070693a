"""Guided label review over a nearest-neighbor graph.

Each labeled example is a vertex; its out-edges point at the examples
nearest to it (self excluded). Two invariants are checked per vertex:
the neighbor labels must have a strict majority (more than half), and
the vertex's own label must agree with it. With binary labels a strict
majority exists exactly when the allow and deny counts differ, so a
singleton neighborhood always has one and only the agreement check can
fail there. The two violation kinds are mutually exclusive: agreement
is only evaluated where a majority exists.

The session loop greedily suggests the single label flip that removes
the most violations, breaking ties toward the lowest vertex index, and
keeps going through zero or negative gains until every vertex has been
visited, the suggestion cap is hit, or the graph is violation-free.
Adjacency never changes during a session: the metric ignores labels,
so flips touch vertex labels only and edges stay bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

from .errors import SessionClosed, StaleSuggestion, TooFewExamples
from .metric import WeightTable
from .model import Dataset, Decision, LabeledExample, Scenario
from .predictor import NeighborSet, nearest_neighbors

DEFAULT_CAP = 15


@dataclass
class NNGraph:
    """Vertex scenarios and adjacency are fixed at build time; labels are
    the mutable part."""

    examples: tuple[LabeledExample, ...]
    adjacency: tuple[NeighborSet, ...]
    labels: list[Decision]

    def scenario(self, vertex: int) -> Scenario:
        return self.examples[vertex].scenario

    def flip(self, vertex: int) -> None:
        self.labels[vertex] = self.labels[vertex].flipped()


class ViolationKind(Enum):
    NO_MAJORITY = "no_majority"
    DISAGREES_WITH_MAJORITY = "disagrees_with_majority"


@dataclass(frozen=True)
class Violation:
    vertex: int
    kind: ViolationKind


@dataclass(frozen=True)
class Suggestion:
    vertex: int
    scenario: Scenario
    current: Decision
    proposed: Decision
    delta: int  # violations removed if accepted; may be zero or negative


@dataclass(frozen=True)
class LogEntry:
    vertex: int
    proposed: Decision
    accepted: bool
    timestamp: str


class SessionStatus(Enum):
    ACTIVE = "active"
    EXHAUSTED = "exhausted"
    CLEAN = "clean"
    CLOSED = "closed"


def build_graph(labeled: list[LabeledExample], table: WeightTable) -> NNGraph:
    if len(labeled) < 2:
        raise TooFewExamples(len(labeled))
    adjacency = tuple(
        nearest_neighbors(example.scenario, labeled, table, exclude=v)
        for v, example in enumerate(labeled)
    )
    return NNGraph(tuple(labeled), adjacency, [e.decision for e in labeled])


def _violations(adjacency: tuple[NeighborSet, ...], labels: list[Decision]) -> list[Violation]:
    found: list[Violation] = []
    for v, neighbors in enumerate(adjacency):
        allow = sum(1 for j in neighbors.members if labels[j] is Decision.ALLOW)
        deny = len(neighbors.members) - allow
        if allow == deny:
            found.append(Violation(v, ViolationKind.NO_MAJORITY))
        else:
            majority = Decision.ALLOW if allow > deny else Decision.DENY
            if labels[v] is not majority:
                found.append(Violation(v, ViolationKind.DISAGREES_WITH_MAJORITY))
    return found


def violations(graph: NNGraph) -> list[Violation]:
    """All violating vertices in index order; the graph's violation count
    is the length of this list."""
    return _violations(graph.adjacency, graph.labels)


def flip_delta(graph: NNGraph, vertex: int) -> int:
    """Exact decrease in the violation count if this one label flips."""
    before = len(_violations(graph.adjacency, graph.labels))
    flipped = list(graph.labels)
    flipped[vertex] = flipped[vertex].flipped()
    after = len(_violations(graph.adjacency, flipped))
    return before - after


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ReviewSession:
    """Single-writer suggestion loop over one target's labeled set.

    Accepted flips update both the graph label and the backing dataset
    row; rejected vertices are only marked visited, so they can come up
    again in a later session. ``next_suggestion`` is a pure function of
    (labels, visited, cap) and repeated calls return the same pending
    suggestion until it is answered.
    """

    def __init__(
        self,
        dataset: Dataset,
        target: str,
        cap: int = DEFAULT_CAP,
        table: WeightTable | None = None,
    ):
        from .weights import resolve_table

        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.dataset = dataset
        self.target = target
        self.cap = cap
        self.table = table if table is not None else resolve_table(dataset, target)
        self.graph = build_graph(dataset.per_target_view(target), self.table)
        self.visited: set[int] = set()
        self.log: list[LogEntry] = []
        self.pending: Suggestion | None = None
        self.status = SessionStatus.ACTIVE
        self._refresh_status()

    @property
    def accepted_count(self) -> int:
        return sum(1 for entry in self.log if entry.accepted)

    @property
    def rejected_count(self) -> int:
        return sum(1 for entry in self.log if not entry.accepted)

    @property
    def issued_count(self) -> int:
        return len(self.log) + (1 if self.pending is not None else 0)

    @property
    def remaining_violations(self) -> int:
        return len(violations(self.graph))

    def _refresh_status(self) -> None:
        if self.status is SessionStatus.CLOSED:
            return
        if self.remaining_violations == 0:
            self.status = SessionStatus.CLEAN
        elif self.pending is None and (
            len(self.log) >= self.cap or len(self.visited) >= len(self.graph.examples)
        ):
            self.status = SessionStatus.EXHAUSTED
        else:
            self.status = SessionStatus.ACTIVE

    def next_suggestion(self) -> Suggestion | None:
        """The pending suggestion, computing one if none is outstanding.

        Returns nothing once the session is clean or exhausted; raises
        only after an explicit close.
        """
        if self.status is SessionStatus.CLOSED:
            raise SessionClosed(self.status.value)
        if self.pending is not None:
            return self.pending
        self._refresh_status()
        if self.status is not SessionStatus.ACTIVE:
            return None
        unvisited = [v for v in range(len(self.graph.examples)) if v not in self.visited]
        best_vertex = min(unvisited, key=lambda v: (-flip_delta(self.graph, v), v))
        current = self.graph.labels[best_vertex]
        self.pending = Suggestion(
            vertex=best_vertex,
            scenario=self.graph.scenario(best_vertex),
            current=current,
            proposed=current.flipped(),
            delta=flip_delta(self.graph, best_vertex),
        )
        return self.pending

    def respond(self, vertex: int, accept: bool) -> Suggestion | None:
        """Answer the pending suggestion; returns the next one, if any."""
        if self.status is SessionStatus.CLOSED:
            raise SessionClosed(self.status.value)
        if self.pending is None or self.pending.vertex != vertex:
            raise StaleSuggestion(
                vertex, self.pending.vertex if self.pending else None
            )
        suggestion = self.pending
        self.pending = None
        self.visited.add(vertex)
        self.log.append(LogEntry(vertex, suggestion.proposed, accept, _utc_now()))
        if accept:
            self.graph.flip(vertex)
            self.dataset.rows[vertex].decisions[self.target] = suggestion.proposed
        self._refresh_status()
        return self.next_suggestion() if self.status is SessionStatus.ACTIVE else None

    def close(self) -> None:
        self.pending = None
        self.status = SessionStatus.CLOSED

    def to_state(self) -> dict:
        """Resumable snapshot; the pending suggestion is re-derived on
        resume rather than stored, since the engine is deterministic."""
        return {
            "target": self.target,
            "cap": self.cap,
            "visited": sorted(self.visited),
            "log": [
                {
                    "vertex": entry.vertex,
                    "proposed": int(entry.proposed),
                    "accepted": entry.accepted,
                    "timestamp": entry.timestamp,
                }
                for entry in self.log
            ],
        }

    @classmethod
    def from_state(cls, dataset: Dataset, state: dict) -> "ReviewSession":
        """Rebuild a session against a dataset that already contains the
        accepted flips; replay pins each accepted label to its proposed
        value, so replaying over an up-to-date dataset is a no-op."""
        session = cls(dataset, state["target"], cap=state["cap"])
        for raw in state["log"]:
            entry = LogEntry(
                vertex=raw["vertex"],
                proposed=Decision.from_int(raw["proposed"]),
                accepted=raw["accepted"],
                timestamp=raw["timestamp"],
            )
            session.log.append(entry)
            session.visited.add(entry.vertex)
            if entry.accepted:
                session.graph.labels[entry.vertex] = entry.proposed
                session.dataset.rows[entry.vertex].decisions[session.target] = entry.proposed
        session.visited.update(state["visited"])
        session._refresh_status()
        return session
