"""Turn a partial order over tag groups into per-tag weight pairs.

Users rank semantic groups of tags ("Finance matters more than Notes") rather
than individual tags. Groups form a DAG under the declared relations; each
group's level is one more than the deepest chain strictly below it, and every
tag inherits its group's level as w1 (w0 stays 1). Tags outside every declared
group are implicit singleton groups at level 1. Levels depend only on the DAG,
so declaration order never changes the result, and incomparable groups with
identical below-chains get equal weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CyclicOrder, UnknownGroupInRelation, ValidationError
from .metric import WeightTable
from .model import Dataset, Universe


@dataclass(frozen=True)
class TagGroup:
    name: str
    members: frozenset[int]


@dataclass(frozen=True)
class WeightConfig:
    """Declared groups plus relations (lesser, greater) between group names."""

    groups: tuple[TagGroup, ...]
    relations: frozenset[tuple[str, str]] = frozenset()

    def group_names(self) -> set[str]:
        return {g.name for g in self.groups}


@dataclass
class DatasetWeights:
    """Weight configs attached to a dataset: one optional global config and
    per-target overrides."""

    global_config: WeightConfig | None = None
    per_target: dict[str, WeightConfig] = field(default_factory=dict)

    def validate(self, universe: Universe, targets: tuple[str, ...]) -> None:
        if self.global_config is not None:
            _validate_config(self.global_config, universe, "weights.global")
        for target, config in self.per_target.items():
            if target not in targets:
                raise ValidationError(
                    f"weight config for unknown target {target!r}", "weights.targets"
                )
            _validate_config(config, universe, f"weights.targets[{target}]")


def _validate_config(config: WeightConfig, universe: Universe, loc: str) -> None:
    seen: dict[int, str] = {}
    names: set[str] = set()
    for group in config.groups:
        if not group.name or not group.name.strip():
            raise ValidationError("group name must be non-empty", loc)
        if group.name in names:
            raise ValidationError(f"duplicate group {group.name!r}", loc)
        names.add(group.name)
        if not group.members:
            raise ValidationError(f"group {group.name!r} has no members", loc)
        for tag_id in group.members:
            if not (0 <= tag_id < universe.n):
                raise ValidationError(
                    f"group {group.name!r} references unknown tag id {tag_id}", loc
                )
            if tag_id in seen:
                raise ValidationError(
                    f"tag {universe.name_of(tag_id)!r} is in both groups "
                    f"{seen[tag_id]!r} and {group.name!r}",
                    loc,
                )
            seen[tag_id] = group.name
    for lesser, greater in config.relations:
        for name in (lesser, greater):
            if name not in names:
                raise ValidationError(
                    f"order relation references undeclared group {name!r}", loc
                )
        if lesser == greater:
            raise ValidationError(f"group {lesser!r} ordered against itself", loc)
    group_levels(config)  # raises CyclicOrder on a cycle


def group_levels(config: WeightConfig) -> dict[str, int]:
    """Level of each group: 1 + the longest chain of strictly-lesser groups.

    DFS with an explicit on-path set; a back edge yields the cycle path.
    """
    below: dict[str, list[str]] = {g.name: [] for g in config.groups}
    for lesser, greater in config.relations:
        if lesser not in below or greater not in below:
            raise UnknownGroupInRelation(lesser if lesser not in below else greater)
        if lesser == greater:
            raise CyclicOrder([lesser, lesser])
        below[greater].append(lesser)
    for preds in below.values():
        preds.sort()

    levels: dict[str, int] = {}
    on_path: list[str] = []
    on_path_set: set[str] = set()

    def visit(name: str) -> int:
        if name in levels:
            return levels[name]
        if name in on_path_set:
            cycle_start = on_path.index(name)
            raise CyclicOrder(on_path[cycle_start:] + [name])
        on_path.append(name)
        on_path_set.add(name)
        level = 1 + max((visit(p) for p in below[name]), default=0)
        on_path.pop()
        on_path_set.remove(name)
        levels[name] = level
        return level

    for name in sorted(below):
        visit(name)
    return levels


def synthesize_weights(config: WeightConfig, universe: Universe) -> WeightTable:
    """Per-tag pairs from the group order: w1 = the group's level, w0 = 1.

    Any layering works as long as a greater group's tags outweigh a lesser
    group's; the longest-chain level is deterministic and treats incomparable
    groups symmetrically.
    """
    _validate_config(config, universe, "weights")
    levels = group_levels(config)
    pairs: dict[int, tuple[int, int]] = {}
    for group in config.groups:
        w1 = levels[group.name]
        if w1 > 1:
            for tag_id in group.members:
                pairs[tag_id] = (1, w1)
    return WeightTable(pairs)


def resolve_table(dataset: Dataset, target: str) -> WeightTable:
    """The weight table in force for one target: its own config if present,
    else the global config, else all-(1,1)."""
    config = dataset.weights.per_target.get(target, dataset.weights.global_config)
    if config is None:
        return WeightTable.unit()
    return synthesize_weights(config, dataset.universe)
