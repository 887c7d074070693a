"""Decision prediction for a query scenario over one target's labeled examples.

The neighbor set N(p) holds every labeled example at the single closest
distance to p, not a fixed-size k. Prediction is the strict majority of N(p)'s
labels. On an exact vote tie the first member (in dataset row order) that is
not a mutual neighbor is removed: q is mutual when p would itself be among
q's nearest neighbors, with q's neighbors ranging over the other examples
plus p. Removing one member from an even tied set always leaves a strict
majority, so a single elimination suffices with binary labels. If every
member is mutual the tie stands and the conservative answer is deny.

Everything is a pure function of (query, labeled list order, weights);
repeated calls agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EmptyLabeledSet
from .metric import Similarity, WeightTable, mu_weighted
from .model import Dataset, Decision, LabeledExample, Scenario


@dataclass(frozen=True)
class NeighborSet:
    """Indices into the labeled list attaining the maximum similarity."""

    similarity: Similarity
    members: tuple[int, ...]


class Provenance(Enum):
    MAJORITY = "majority"
    TIE_BREAK_ELIMINATION = "tie_break_elimination"
    DEFAULT_DENY = "default_deny"


@dataclass(frozen=True)
class Prediction:
    decision: Decision
    provenance: Provenance
    neighbors: NeighborSet
    vote: tuple[int, int]  # (allow count, deny count) of the voting members
    removed_index: int | None = None


def nearest_neighbors(
    query: Scenario,
    labeled: list[LabeledExample],
    table: WeightTable,
    exclude: int | None = None,
) -> NeighborSet:
    """Exhaustive scan for the argmax of the weighted similarity.

    `exclude` skips one index, for computing an example's neighbors without
    itself.
    """
    best: Similarity | None = None
    members: list[int] = []
    for i, example in enumerate(labeled):
        if i == exclude:
            continue
        sim = mu_weighted(query, example.scenario, table)
        if best is None or sim > best:
            best = sim
            members = [i]
        elif sim == best:
            members.append(i)
    if best is None:
        raise EmptyLabeledSet()
    return NeighborSet(best, tuple(members))


def _vote(labeled: list[LabeledExample], members: tuple[int, ...]) -> tuple[int, int]:
    allow = sum(1 for i in members if labeled[i].decision is Decision.ALLOW)
    return allow, len(members) - allow


def _is_mutual(
    q_index: int,
    query: Scenario,
    labeled: list[LabeledExample],
    table: WeightTable,
) -> bool:
    """Is the query among q's nearest neighbors, with q's candidates being
    every other labeled example plus the query itself?"""
    q = labeled[q_index].scenario
    sim_to_query = mu_weighted(q, query, table)
    for j, example in enumerate(labeled):
        if j == q_index:
            continue
        if mu_weighted(q, example.scenario, table) > sim_to_query:
            return False
    return True


def predict(
    query: Scenario, labeled: list[LabeledExample], table: WeightTable
) -> Prediction:
    if not labeled:
        raise EmptyLabeledSet()
    neighbors = nearest_neighbors(query, labeled, table)
    allow, deny = _vote(labeled, neighbors.members)
    if allow != deny:
        decision = Decision.ALLOW if allow > deny else Decision.DENY
        return Prediction(decision, Provenance.MAJORITY, neighbors, (allow, deny))

    for q_index in neighbors.members:
        if not _is_mutual(q_index, query, labeled, table):
            remaining = tuple(i for i in neighbors.members if i != q_index)
            reduced = NeighborSet(neighbors.similarity, remaining)
            allow, deny = _vote(labeled, remaining)
            decision = Decision.ALLOW if allow > deny else Decision.DENY
            return Prediction(
                decision,
                Provenance.TIE_BREAK_ELIMINATION,
                reduced,
                (allow, deny),
                removed_index=q_index,
            )

    return Prediction(Decision.DENY, Provenance.DEFAULT_DENY, neighbors, (allow, deny))


def predict_for_target(dataset: Dataset, target: str, query: Scenario) -> Prediction:
    """Predict against one target's rows with that target's resolved weights."""
    from .weights import resolve_table

    return predict(query, dataset.per_target_view(target), resolve_table(dataset, target))


def unseen_tags(query: Scenario, labeled: list[LabeledExample]) -> tuple[str, ...]:
    """Query tags that occur in no labeled scenario. Legal, but worth
    surfacing in explanations: they only ever increase difference counts."""
    seen: set[int] = set()
    for example in labeled:
        seen.update(example.scenario.members)
    return tuple(
        query.universe.name_of(i) for i in query.members if i not in seen
    )


def prediction_document(
    prediction: Prediction,
    query: Scenario,
    labeled: list[LabeledExample],
) -> dict:
    """JSON-ready explanation: decision, provenance, vote and each voting
    neighbor with its scenario and exact similarity string."""
    sim = str(prediction.neighbors.similarity)
    return {
        "query": list(query.names),
        "decision": prediction.decision.word,
        "decision_bit": int(prediction.decision),
        "provenance": prediction.provenance.value,
        "vote": {"allow": prediction.vote[0], "deny": prediction.vote[1]},
        "similarity": sim,
        "neighbors": [
            {
                "row": i,
                "scenario": list(labeled[i].scenario.names),
                "decision": labeled[i].decision.word,
                "similarity": sim,
            }
            for i in prediction.neighbors.members
        ],
        "removed_row": prediction.removed_index,
        "unseen_tags": list(unseen_tags(query, labeled)),
    }
