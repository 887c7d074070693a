"""Independent reference implementations used as oracles by the test suite.

Everything here is written from the definitions with plain data (name
sets, dicts, truth tables) and deliberately shares no code with the
package. Values computed here are compared against the package or were
computed once and frozen into golden asserts.
"""

from fractions import Fraction
from itertools import product


def xor_count_truth_table(a_names: set, b_names: set) -> tuple[int, int]:
    """(#assignments where the two conjunctions disagree, #assignments),
    by enumerating a full truth table over the union of mentioned tags."""
    variables = sorted(a_names | b_names)
    disagreements = 0
    total = 0
    for bits in product([False, True], repeat=len(variables)):
        on = {v for v, bit in zip(variables, bits) if bit}
        value_a = a_names <= on
        value_b = b_names <= on
        disagreements += value_a != value_b
        total += 1
    return disagreements, total


def mu_reference(a_names: set, b_names: set) -> Fraction:
    disagreements, total = xor_count_truth_table(a_names, b_names)
    return 1 - Fraction(disagreements, total)


def mu_reference_bitmask(a_names: set, b_names: set) -> Fraction:
    """Same truth-table enumeration with the assignment packed into an
    integer, fast enough for bulk randomized cross-checks."""
    variables = sorted(a_names | b_names)
    position = {v: i for i, v in enumerate(variables)}
    mask_a = sum(1 << position[v] for v in a_names)
    mask_b = sum(1 << position[v] for v in b_names)
    total = 1 << len(variables)
    disagreements = 0
    for assignment in range(total):
        if (assignment & mask_a == mask_a) != (assignment & mask_b == mask_b):
            disagreements += 1
    return 1 - Fraction(disagreements, total)


def mu_weighted_reference(a_names: set, b_names: set, weights: dict) -> Fraction:
    """Closed form restated from scratch. `weights` maps tag name to a
    (w0, w1) pair; missing tags count as (1, 1)."""

    def pair(name):
        return weights.get(name, (1, 1))

    def span(names):
        out = Fraction(1)
        for n in names:
            w0, w1 = pair(n)
            out *= w0 + w1
        return out

    def floor(names):
        out = Fraction(1)
        for n in names:
            out *= pair(n)[0]
        return out

    only_b = b_names - a_names
    only_a = a_names - b_names
    z1 = span(only_b) - floor(only_b)
    z2 = span(only_a) - floor(only_a)
    z = span(a_names | b_names)
    return 1 - Fraction(z1 + z2, z)


def predict_reference(query_names: set, examples: list, weights: dict) -> dict:
    """`examples` is a list of (names:set, decision:int). Returns a dict
    with decision, rule used, neighbor indices and removed index."""
    sims = [mu_weighted_reference(query_names, names, weights) for names, _ in examples]
    best = max(sims)
    neighbor_ids = [i for i, s in enumerate(sims) if s == best]
    votes = [examples[i][1] for i in neighbor_ids]
    allow, deny = votes.count(1), votes.count(0)
    if allow != deny:
        return {
            "decision": 1 if allow > deny else 0,
            "rule": "majority",
            "neighbors": neighbor_ids,
            "removed": None,
        }
    for i in neighbor_ids:
        if not is_mutual_reference(i, query_names, examples, weights):
            kept = [j for j in neighbor_ids if j != i]
            votes = [examples[j][1] for j in kept]
            allow, deny = votes.count(1), votes.count(0)
            return {
                "decision": 1 if allow > deny else 0,
                "rule": "elimination",
                "neighbors": kept,
                "removed": i,
            }
    return {"decision": 0, "rule": "default_deny", "neighbors": neighbor_ids, "removed": None}


def is_mutual_reference(index: int, query_names: set, examples: list, weights: dict) -> bool:
    """Membership of the query in example #index's own nearest set, where
    that set ranges over the other examples plus the query."""
    own = examples[index][0]
    candidates = [names for j, (names, _) in enumerate(examples) if j != index]
    candidates.append(query_names)
    sims = [mu_weighted_reference(own, names, weights) for names in candidates]
    return mu_weighted_reference(own, query_names, weights) == max(sims)


def violations_reference(examples: list, weights: dict) -> list:
    """[(vertex, kind)] with kind 'no_majority' or 'disagrees', from the
    invariant definitions; adjacency recomputed here from scratch."""
    out = []
    for v, (names, decision) in enumerate(examples):
        sims = [
            mu_weighted_reference(names, other, weights) if j != v else None
            for j, (other, _) in enumerate(examples)
        ]
        best = max(s for s in sims if s is not None)
        neighbor_votes = [
            examples[j][1] for j, s in enumerate(sims) if s is not None and s == best
        ]
        allow, deny = neighbor_votes.count(1), neighbor_votes.count(0)
        if allow == deny:
            out.append((v, "no_majority"))
        elif decision != (1 if allow > deny else 0):
            out.append((v, "disagrees"))
    return out


def best_flip_reference(examples: list, weights: dict) -> tuple[int, int]:
    """(vertex, delta) of the flip that removes the most violations,
    lowest index on ties, by flipping every vertex and recounting."""
    base = len(violations_reference(examples, weights))
    best_vertex, best_delta = None, None
    for v in range(len(examples)):
        flipped = [
            (names, 1 - decision if j == v else decision)
            for j, (names, decision) in enumerate(examples)
        ]
        delta = base - len(violations_reference(flipped, weights))
        if best_delta is None or delta > best_delta:
            best_vertex, best_delta = v, delta
    return best_vertex, best_delta


def splitmix64_reference(seed: int):
    """Generator restated from the published algorithm, for cross-checking
    the package's generator word by word."""
    mask = (1 << 64) - 1
    state = seed & mask
    while True:
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        yield z ^ (z >> 31)
