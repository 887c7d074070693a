"""Domain vocabulary: tags, scenarios, targets, labeled examples, datasets.

A scenario is a non-empty set of tags; semantically it is a conjunction of
Boolean variables, so scenarios are order-free and duplicate-free. All values
here are immutable after construction except dataset rows, whose decisions the
review loop may flip in place.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import IntEnum
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import (
    DuplicateRowWarning,
    DuplicateTag,
    EmptyName,
    EmptyScenario,
    EmptyUniverse,
    UnknownTag,
    UnknownTarget,
    ValidationError,
)

if TYPE_CHECKING:
    from .weights import DatasetWeights


class Decision(IntEnum):
    DENY = 0
    ALLOW = 1

    @property
    def word(self) -> str:
        return "allow" if self is Decision.ALLOW else "deny"

    @classmethod
    def from_int(cls, value: int) -> "Decision":
        if value not in (0, 1):
            raise ValueError(f"decision must be 0 or 1, got {value!r}")
        return cls(value)

    def flipped(self) -> "Decision":
        return Decision(1 - int(self))


@dataclass(frozen=True)
class Tag:
    """A named Boolean variable; `id` is its insertion rank in the universe."""

    name: str
    id: int


class Universe:
    """Ordered collection of distinct tags; ids are dense and stable."""

    __slots__ = ("tags", "_index", "_hash")

    def __init__(self, names: Iterable[str]):
        tags: list[Tag] = []
        index: dict[str, int] = {}
        for name in names:
            if not name or not name.strip():
                raise EmptyName()
            if name in index:
                raise DuplicateTag(name)
            index[name] = len(tags)
            tags.append(Tag(name, len(tags)))
        if not tags:
            raise EmptyUniverse()
        self.tags: tuple[Tag, ...] = tuple(tags)
        self._index = index
        self._hash = hash(tuple(index))

    @property
    def n(self) -> int:
        return len(self.tags)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tags)

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownTag(name) from None

    def name_of(self, tag_id: int) -> str:
        return self.tags[tag_id].name

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Universe({list(self.names)!r})"


def build_universe(names: Iterable[str]) -> Universe:
    return Universe(names)


@dataclass(frozen=True)
class Scenario:
    """Non-empty tag set in canonical ascending-id order."""

    universe: Universe
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise EmptyScenario()
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))
        if self.members[-1] >= self.universe.n or self.members[0] < 0:
            raise ValueError("scenario member id out of range for its universe")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.universe.name_of(i) for i in self.members)

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __repr__(self) -> str:
        return "{%s}" % ", ".join(self.names)


def make_scenario(universe: Universe, names: Iterable[str]) -> Scenario:
    ids = [universe.id_of(name) for name in names]
    if not ids:
        raise EmptyScenario()
    return Scenario(universe, tuple(ids))


@dataclass(frozen=True)
class LabeledExample:
    scenario: Scenario
    decision: Decision


@dataclass
class DatasetRow:
    """One scenario with a decision per target; decisions are mutable so the
    review loop can apply accepted flips."""

    scenario: Scenario
    decisions: dict[str, Decision]


def _empty_weights() -> "DatasetWeights":
    from .weights import DatasetWeights

    return DatasetWeights()


@dataclass
class Dataset:
    universe: Universe
    targets: tuple[str, ...]
    rows: list[DatasetRow]
    weights: "DatasetWeights" = field(default_factory=_empty_weights)

    @classmethod
    def build(
        cls,
        universe: Universe,
        targets: Iterable[str],
        rows: "Iterable[tuple[Scenario, Mapping[str, int | Decision]] | DatasetRow]",
        weights: "DatasetWeights | None" = None,
    ) -> "Dataset":
        """Validate and construct; duplicate scenarios with identical labels are
        merged with a warning, conflicting labels are rejected. Rows may be
        (scenario, decisions) pairs or prebuilt DatasetRow objects."""
        target_list: list[str] = []
        for t in targets:
            if not t or not t.strip():
                raise ValidationError("target name must be non-empty", "targets")
            if t in target_list:
                raise ValidationError(f"duplicate target {t!r}", "targets")
            target_list.append(t)
        target_set = set(target_list)

        built: list[DatasetRow] = []
        by_scenario: dict[tuple[int, ...], int] = {}
        for row_no, raw in enumerate(rows):
            if isinstance(raw, DatasetRow):
                scenario, decisions = raw.scenario, raw.decisions
            else:
                scenario, decisions = raw
            loc = f"rows[{row_no}]"
            if scenario.universe != universe:
                raise ValidationError("scenario not from the dataset universe", loc)
            got = set(decisions)
            if got != target_set:
                missing = sorted(target_set - got)
                extra = sorted(got - target_set)
                detail = []
                if missing:
                    detail.append(f"missing decisions for {missing}")
                if extra:
                    detail.append(f"decisions for unknown targets {extra}")
                raise ValidationError("; ".join(detail), loc)
            normalized = {t: Decision.from_int(int(decisions[t])) for t in target_list}
            prior = by_scenario.get(scenario.members)
            if prior is not None:
                if built[prior].decisions == normalized:
                    warnings.warn(
                        f"rows {prior} and {row_no} repeat scenario {scenario!r} "
                        "with identical labels; keeping one",
                        DuplicateRowWarning,
                        stacklevel=2,
                    )
                    continue
                raise ValidationError(
                    f"scenario {scenario!r} already appears at row {prior} "
                    "with different decisions",
                    loc,
                )
            by_scenario[scenario.members] = len(built)
            built.append(DatasetRow(scenario, normalized))

        ds = cls(universe, tuple(target_list), built)
        if weights is not None:
            weights.validate(universe, ds.targets)
            ds.weights = weights
        return ds

    def per_target_view(self, target: str) -> list[LabeledExample]:
        """Read-only projection of the rows onto one target, in row order."""
        if target not in self.targets:
            raise UnknownTarget(target)
        return [LabeledExample(r.scenario, r.decisions[target]) for r in self.rows]

    def used_tag_ids(self) -> list[int]:
        """Ids of tags that occur in at least one row, ascending."""
        seen: set[int] = set()
        for row in self.rows:
            seen.update(row.scenario.members)
        return sorted(seen)
