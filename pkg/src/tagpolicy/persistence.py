"""File formats: dataset documents, CSV import, sessions, tests, reports.

One self-contained JSON document per dataset: tag list, target list, rows
(scenario tag names plus one 0/1 decision per target), and optional weight
configuration (tag groups and a partial order, global or per target).

Serialization is canonical: UTF-8, sorted object keys, two-space indent,
a single trailing newline, scenario tags in universe order, groups sorted
by name, order pairs sorted. Structurally equal datasets therefore produce
byte-identical files, which makes content hashes meaningful: a session
document pins the sha256 of the dataset it was reviewing, and resuming
against anything else fails loudly, because suggestion order depends on
row order.

CSV import accepts the spreadsheet shape `scenario,<target1>,<target2>,...`
with the scenario cell holding `+`-joined tag names.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

from .errors import FingerprintMismatch, ParseError, ValidationError
from .evaluation import EvalReport
from .metric import WeightTable
from .model import (
    Dataset,
    DatasetRow,
    Decision,
    Scenario,
    Universe,
    build_universe,
    make_scenario,
)
from .review import ReviewSession
from .weights import DatasetWeights, TagGroup, WeightConfig

FORMAT_VERSION = 1


def canonical_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_document(document: dict, path: str | Path) -> None:
    Path(path).write_text(canonical_json(document), encoding="utf-8")


def read_document(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(str(path), err.msg) from err
    if not isinstance(document, dict):
        raise ParseError(str(path), "top-level value must be an object")
    return document


# ---------------------------------------------------------------- datasets


def dataset_to_document(dataset: Dataset) -> dict:
    universe = dataset.universe
    return {
        "version": FORMAT_VERSION,
        "tags": list(universe.names),
        "targets": list(dataset.targets),
        "rows": [
            {
                "scenario": list(row.scenario.names),
                "decisions": {t: int(d) for t, d in row.decisions.items()},
            }
            for row in dataset.rows
        ],
        "weights": _weights_to_document(dataset.weights, universe),
    }


def _weights_to_document(weights: DatasetWeights, universe: Universe) -> dict:
    return {
        "global": _config_to_document(weights.global_config, universe),
        "per_target": {
            target: _config_to_document(config, universe)
            for target, config in sorted(weights.per_target.items())
        },
    }


def _config_to_document(config: WeightConfig | None, universe: Universe) -> dict | None:
    if config is None:
        return None
    return {
        "groups": [
            {
                "name": group.name,
                "members": [universe.name_of(i) for i in sorted(group.members)],
            }
            for group in sorted(config.groups, key=lambda g: g.name)
        ],
        "order": sorted([lesser, greater] for lesser, greater in config.relations),
    }


def dataset_fingerprint(dataset: Dataset) -> str:
    text = canonical_json(dataset_to_document(dataset))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    write_document(dataset_to_document(dataset), path)


def load_dataset(path: str | Path) -> Dataset:
    return dataset_from_document(read_document(path))


def dataset_from_document(document: dict) -> Dataset:
    version = document.get("version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unrecognized format version {version!r}", "version")

    tags = _require_list(document, "tags")
    for i, name in enumerate(tags):
        _check_name(name, f"tags[{i}]")
        if "+" in name:
            raise ValidationError("tag names may not contain '+'", f"tags[{i}]")
    if len(set(tags)) != len(tags):
        raise ValidationError("duplicate tag name", "tags")
    universe = build_universe(tags)

    targets = _require_list(document, "targets")
    if not targets:
        raise ValidationError("at least one target required", "targets")
    for i, name in enumerate(targets):
        _check_name(name, f"targets[{i}]")
    if len(set(targets)) != len(targets):
        raise ValidationError("duplicate target name", "targets")

    rows = []
    for i, raw in enumerate(_require_list(document, "rows")):
        rows.append(_row_from_document(raw, universe, targets, f"rows[{i}]"))

    weights = _weights_from_document(document.get("weights"), universe, targets)
    return Dataset.build(universe, targets, rows, weights)


def _row_from_document(
    raw, universe: Universe, targets: list, location: str
) -> DatasetRow:
    if not isinstance(raw, dict):
        raise ValidationError("row must be an object", location)
    names = raw.get("scenario")
    if not isinstance(names, list) or not names:
        raise ValidationError("scenario must be a non-empty tag list", f"{location}.scenario")
    for name in names:
        if name not in universe:
            raise ValidationError(f"unknown tag {name!r}", f"{location}.scenario")
    decisions_raw = raw.get("decisions")
    if not isinstance(decisions_raw, dict):
        raise ValidationError("decisions must be an object", f"{location}.decisions")
    if set(decisions_raw) != set(targets):
        raise ValidationError(
            "decisions must cover exactly the declared targets", f"{location}.decisions"
        )
    decisions = {}
    for target in targets:
        value = decisions_raw[target]
        if isinstance(value, bool) or value not in (0, 1):
            raise ValidationError(
                "decision must be 0 or 1", f"{location}.decisions.{target}"
            )
        decisions[target] = Decision.from_int(value)
    return DatasetRow(make_scenario(universe, names), decisions)


def _weights_from_document(raw, universe: Universe, targets: list) -> DatasetWeights:
    if raw is None:
        return DatasetWeights()
    if not isinstance(raw, dict):
        raise ValidationError("weights must be an object", "weights")
    global_config = config_from_document(raw.get("global"), universe, "weights.global")
    per_target = {}
    for target, entry in (raw.get("per_target") or {}).items():
        if target not in targets:
            raise ValidationError(f"unknown target {target!r}", "weights.per_target")
        config = config_from_document(entry, universe, f"weights.per_target.{target}")
        if config is not None:
            per_target[target] = config
    return DatasetWeights(global_config=global_config, per_target=per_target)


def config_from_document(raw, universe: Universe, location: str) -> WeightConfig | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ValidationError("weight config must be an object", location)
    groups = []
    names = set()
    for i, entry in enumerate(raw.get("groups") or []):
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise ValidationError("group needs a name", f"{location}.groups[{i}]")
        members = entry.get("members")
        if not isinstance(members, list) or not members:
            raise ValidationError(
                "group needs a non-empty member list", f"{location}.groups[{i}].members"
            )
        for name in members:
            if name not in universe:
                raise ValidationError(
                    f"unknown tag {name!r}", f"{location}.groups[{i}].members"
                )
        names.add(entry["name"])
        groups.append(
            TagGroup(entry["name"], frozenset(universe.id_of(m) for m in members))
        )
    relations = set()
    for i, pair in enumerate(raw.get("order") or []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError(
                "order entries are [lesser, greater] pairs", f"{location}.order[{i}]"
            )
        lesser, greater = pair
        for name in (lesser, greater):
            if name not in names:
                raise ValidationError(
                    f"order names undeclared group {name!r}", f"{location}.order[{i}]"
                )
        relations.add((lesser, greater))
    return WeightConfig(groups=tuple(groups), relations=frozenset(relations))


def _require_list(document: dict, key: str) -> list:
    value = document.get(key)
    if not isinstance(value, list):
        raise ValidationError(f"{key} must be a list", key)
    return value


def _check_name(name, location: str) -> None:
    if not isinstance(name, str) or not name:
        raise ValidationError("name must be a non-empty string", location)


# --------------------------------------------------------------- CSV import


def import_csv(path: str | Path) -> Dataset:
    """Spreadsheet shape: header `scenario,<target>,...`; one row per
    example; scenario cell holds `+`-joined tag names. The universe is the
    tags in order of first appearance."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(str(path), "empty file") from None
        if not header or header[0].strip() != "scenario" or len(header) < 2:
            raise ParseError(str(path), "header must be scenario,<target>,...")
        targets = [cell.strip() for cell in header[1:]]

        raw_rows = []
        tag_order: dict[str, None] = {}
        for line, cells in enumerate(reader, start=2):
            if not cells or all(not c.strip() for c in cells):
                continue
            if len(cells) != len(header):
                raise ParseError(str(path), f"line {line}: expected {len(header)} cells")
            names = [t.strip() for t in cells[0].split("+") if t.strip()]
            if not names:
                raise ParseError(str(path), f"line {line}: empty scenario")
            for name in names:
                tag_order.setdefault(name, None)
            decisions = {}
            for target, cell in zip(targets, cells[1:]):
                value = cell.strip()
                if value not in ("0", "1"):
                    raise ValidationError(
                        "decision must be 0 or 1", f"{path}:{line}:{target}"
                    )
                decisions[target] = Decision.from_int(int(value))
            raw_rows.append((names, decisions))

    universe = build_universe(list(tag_order))
    rows = [
        DatasetRow(make_scenario(universe, names), decisions)
        for names, decisions in raw_rows
    ]
    return Dataset.build(universe, list(targets), rows)


# ----------------------------------------------------------------- sessions


def save_session(session: ReviewSession, path: str | Path) -> None:
    document = {
        "version": FORMAT_VERSION,
        "fingerprint": dataset_fingerprint(session.dataset),
        **session.to_state(),
    }
    write_document(document, path)


def resume_session(path: str | Path, dataset: Dataset) -> ReviewSession:
    document = read_document(path)
    expected = document.get("fingerprint")
    actual = dataset_fingerprint(dataset)
    if expected != actual:
        raise FingerprintMismatch(expected, actual)
    return ReviewSession.from_state(dataset, document)


# ------------------------------------------------------------ tests, reports


def save_tests(
    tests: list[tuple[Scenario, dict[str, Decision] | None]], path: str | Path
) -> None:
    document = {
        "version": FORMAT_VERSION,
        "tests": [
            {
                "scenario": list(scenario.names),
                **(
                    {"decisions": {t: int(d) for t, d in truth.items()}}
                    if truth is not None
                    else {}
                ),
            }
            for scenario, truth in tests
        ],
    }
    write_document(document, path)


def load_tests(
    path: str | Path, universe: Universe
) -> list[tuple[Scenario, dict[str, Decision] | None]]:
    document = read_document(path)
    out = []
    for i, raw in enumerate(_require_list(document, "tests")):
        location = f"tests[{i}]"
        if not isinstance(raw, dict) or not isinstance(raw.get("scenario"), list):
            raise ValidationError("test needs a scenario tag list", location)
        scenario = make_scenario(universe, raw["scenario"])
        truth = None
        if "decisions" in raw:
            truth = {}
            for target, value in raw["decisions"].items():
                if isinstance(value, bool) or value not in (0, 1):
                    raise ValidationError(
                        "decision must be 0 or 1", f"{location}.decisions.{target}"
                    )
                truth[target] = Decision.from_int(value)
        out.append((scenario, truth))
    return out


def save_report(report: EvalReport, path: str | Path) -> None:
    write_document(report.to_document(), path)


def weight_table_document(table: WeightTable, universe: Universe) -> dict:
    return {name: list(pair) for name, pair in table.as_mapping(universe).items()}
