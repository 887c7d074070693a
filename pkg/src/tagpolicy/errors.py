"""Exception taxonomy for the tagpolicy engine.

Every error carries enough context (names, indices, row locators) to be
actionable from the CLI and to map onto HTTP status codes in the service.
"""

from __future__ import annotations


class TagPolicyError(Exception):
    """Base class for all engine errors."""


# --- core model -------------------------------------------------------------

class EmptyUniverse(TagPolicyError):
    def __init__(self) -> None:
        super().__init__("a universe needs at least one tag")


class EmptyName(TagPolicyError):
    def __init__(self) -> None:
        super().__init__("tag names must be non-empty")


class DuplicateTag(TagPolicyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"duplicate tag name: {name!r}")
        self.name = name


class UnknownTag(TagPolicyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown tag: {name!r}")
        self.name = name


class EmptyScenario(TagPolicyError):
    def __init__(self) -> None:
        super().__init__("a scenario needs at least one tag")


class UnknownTarget(TagPolicyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown policy target: {name!r}")
        self.name = name


class UniverseMismatch(TagPolicyError):
    def __init__(self) -> None:
        super().__init__("scenarios belong to different universes")


class DuplicateRowWarning(UserWarning):
    """Same scenario appears twice with identical labels; rows were merged."""


# --- metric -----------------------------------------------------------------

class TooLargeForOracle(TagPolicyError):
    def __init__(self, union_size: int, limit: int) -> None:
        super().__init__(
            f"enumeration oracle limited to {limit} union tags, got {union_size}"
        )
        self.union_size = union_size
        self.limit = limit


# --- weights ----------------------------------------------------------------

class CyclicOrder(TagPolicyError):
    """The group order contains a cycle; `path` walks it, e.g. [A, B, A]."""

    def __init__(self, path: list[str]) -> None:
        super().__init__("cyclic group order: " + " < ".join(path))
        self.path = path


class UnknownGroupInRelation(TagPolicyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"order relation references undeclared group: {name!r}")
        self.name = name


# --- predictor / review -----------------------------------------------------

class EmptyLabeledSet(TagPolicyError):
    def __init__(self) -> None:
        super().__init__("no labeled examples to predict from")


class TooFewExamples(TagPolicyError):
    def __init__(self, count: int) -> None:
        super().__init__(f"need at least 2 labeled examples to build a graph, got {count}")
        self.count = count


class SessionClosed(TagPolicyError):
    def __init__(self, status: str) -> None:
        super().__init__(f"review session is no longer active (status: {status})")
        self.status = status


class StaleSuggestion(TagPolicyError):
    def __init__(self, vertex: int, pending: int | None) -> None:
        if pending is None:
            msg = f"no suggestion pending, cannot respond for vertex {vertex}"
        else:
            msg = f"pending suggestion is for vertex {pending}, not {vertex}"
        super().__init__(msg)
        self.vertex = vertex
        self.pending = pending


# --- evaluation ---------------------------------------------------------------

class EmptyVocabulary(TagPolicyError):
    def __init__(self) -> None:
        super().__init__("no tags available to generate test scenarios from")


class ExhaustedSpace(TagPolicyError):
    def __init__(self, requested: int, available: int) -> None:
        super().__init__(
            f"requested {requested} distinct test scenarios but only "
            f"{available} remain in the sample space"
        )
        self.requested = requested
        self.available = available


class MissingGroundTruth(TagPolicyError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"incomplete ground truth: {detail}")


# --- persistence --------------------------------------------------------------

class ParseError(TagPolicyError):
    def __init__(self, location: str, detail: str) -> None:
        super().__init__(f"{location}: {detail}")
        self.location = location
        self.detail = detail


class ValidationError(TagPolicyError):
    """A document violated a schema rule; `location` points at the row/field."""

    def __init__(self, rule: str, location: str) -> None:
        super().__init__(f"{location}: {rule}")
        self.rule = rule
        self.location = location


class FingerprintMismatch(TagPolicyError):
    def __init__(self, expected: str, actual: str) -> None:
        super().__init__(
            "session was saved against a different dataset "
            f"(expected fingerprint {expected[:12]}…, got {actual[:12]}…)"
        )
        self.expected = expected
        self.actual = actual
