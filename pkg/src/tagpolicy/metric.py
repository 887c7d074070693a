"""Exact similarity between two scenarios.

A scenario is a conjunction of Boolean tag variables. The distance between two
scenarios f and g is measured by how often the two conjunctions disagree:
count the variable assignments on which exactly one of them is true, divide by
the number of assignments, and subtract from 1. Higher is closer; the value is
always in (0, 1] and equals 1 exactly when the scenarios are equal.

For conjunctions the disagreement count has a closed form. With
k1 = |tags only in f|, k2 = |tags only in g| and k = |tags in either|:

    similarity(f, g) = 1 - (2^k1 + 2^k2 - 2) / 2^k

Variables outside both scenarios cancel out, so the value does not depend on
the universe size.

The weighted variant gives each tag i a pair (w0_i, w1_i) of positive integer
weights for the variable being 0 or 1. Products over the two difference sets
replace the powers of two:

    z1 = prod_{only g}(w0+w1) - prod_{only g}(w0)
    z2 = prod_{only f}(w0+w1) - prod_{only f}(w0)
    z  = prod_{union}(w0+w1)

    weighted similarity = 1 - (z1 + z2) / z

With all pairs (1, 1) this reduces to the unweighted form. All arithmetic is
exact rational: nearest-neighbor sets and tie detection depend on exact
equality of similarities, which floating point cannot provide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Mapping

from .errors import TooLargeForOracle, UniverseMismatch
from .model import Scenario, Universe

# Similarities are plain Fractions; str() of a Fraction ("5/6", or "1" for
# whole values) is the canonical wire form.
Similarity = Fraction

ORACLE_LIMIT = 24


@dataclass(frozen=True)
class DifferenceProfile:
    """Partition of two scenarios' tags: only in the left, only in the right,
    shared. Tags in neither are implied by the universe and never materialized."""

    only_left: frozenset[int]
    only_right: frozenset[int]
    shared: frozenset[int]

    @property
    def k1(self) -> int:
        return len(self.only_left)

    @property
    def k2(self) -> int:
        return len(self.only_right)

    @property
    def k(self) -> int:
        return len(self.only_left) + len(self.only_right) + len(self.shared)


def _check_universe(a: Scenario, b: Scenario) -> None:
    if a.universe != b.universe:
        raise UniverseMismatch()


def difference_profile(a: Scenario, b: Scenario) -> DifferenceProfile:
    _check_universe(a, b)
    left, right = a.member_set, b.member_set
    return DifferenceProfile(
        only_left=left - right,
        only_right=right - left,
        shared=left & right,
    )


def mu(a: Scenario, b: Scenario) -> Similarity:
    """Unweighted similarity, computed from the closed form."""
    p = difference_profile(a, b)
    return 1 - Fraction(2 ** p.k1 + 2 ** p.k2 - 2, 2 ** p.k)


class WeightTable:
    """Total map from tag id to a (w0, w1) pair, defaulting to (1, 1).

    w0 weighs an assignment where the tag's variable is 0, w1 where it is 1.
    Both must be positive integers so similarities stay rational and the
    metric's range guarantees hold.
    """

    __slots__ = ("_pairs",)

    def __init__(self, pairs: Mapping[int, tuple[int, int]] | None = None):
        cleaned: dict[int, tuple[int, int]] = {}
        for tag_id, (w0, w1) in (pairs or {}).items():
            if not (isinstance(w0, int) and isinstance(w1, int)) or w0 < 1 or w1 < 1:
                raise ValueError(
                    f"weights must be integers >= 1, got ({w0!r}, {w1!r}) for tag {tag_id}"
                )
            if (w0, w1) != (1, 1):
                cleaned[tag_id] = (w0, w1)
        self._pairs = cleaned

    @classmethod
    def unit(cls) -> "WeightTable":
        return cls()

    def pair(self, tag_id: int) -> tuple[int, int]:
        return self._pairs.get(tag_id, (1, 1))

    def is_unit(self) -> bool:
        return not self._pairs

    def as_mapping(self, universe: Universe) -> dict[str, tuple[int, int]]:
        return {t.name: self.pair(t.id) for t in universe.tags}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeightTable) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(frozenset(self._pairs.items()))

    def __repr__(self) -> str:
        return f"WeightTable({self._pairs!r})"


def mu_weighted(a: Scenario, b: Scenario, table: WeightTable) -> Similarity:
    """Weighted similarity from the z1/z2/z closed form; symmetric, exact,
    and pointwise equal to mu() under the all-(1,1) table."""
    p = difference_profile(a, b)
    pairs = table.pair

    def diff_term(ids: frozenset[int]) -> int:
        total = prod(sum(pairs(i)) for i in ids)
        zeros = prod(pairs(i)[0] for i in ids)
        return total - zeros

    z1 = diff_term(p.only_right)
    z2 = diff_term(p.only_left)
    z = prod(sum(pairs(i)) for i in p.only_left | p.only_right | p.shared)
    return 1 - Fraction(z1 + z2, z)


def oracle_xor_count(a: Scenario, b: Scenario, n_effective: int) -> int:
    """Count assignments over n_effective variables satisfying exactly one of
    the two conjunctions, by exhaustive enumeration.

    Only the union variables are enumerated; each variable outside both
    scenarios doubles the count, which is applied analytically. Ground truth
    for mu() in tests; never used on the prediction path.
    """
    _check_universe(a, b)
    union = sorted(a.member_set | b.member_set)
    k = len(union)
    if k > ORACLE_LIMIT:
        raise TooLargeForOracle(k, ORACLE_LIMIT)
    if n_effective < k:
        raise ValueError(f"n_effective={n_effective} smaller than union size {k}")
    position = {tag_id: bit for bit, tag_id in enumerate(union)}
    mask_a = sum(1 << position[i] for i in a.members)
    mask_b = sum(1 << position[i] for i in b.members)
    count = 0
    for sigma in range(2 ** k):
        count += (sigma & mask_a == mask_a) != (sigma & mask_b == mask_b)
    return count * 2 ** (n_effective - k)
