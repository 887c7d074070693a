"""Evaluation harness: random test scenarios, two baselines, accuracy report.

Randomness comes from SplitMix64, chosen over the stdlib Mersenne Twister
because the algorithm is tiny enough to restate in a README and therefore
reproducible from any language, which keeps seeded reports portable across
implementations. Uniform ranges use rejection sampling, so there is no
modulo bias; subset draws use a partial Fisher-Yates shuffle.

Test scenarios draw their tags from the vocabulary actually used in the
dataset's rows, sized uniformly between 1 and `max_tags`, and must be
distinct from the training scenarios and from each other. Feasibility is
checked exactly (binomial count of the scenario space minus the training
scenarios inside it) before any sampling, so a too-large request fails
fast instead of spinning.

Baselines: CoinFlip guesses allow/deny with equal probability; MostFreq
always answers the training set's majority label, denying on an exact tie.
Accuracies are exact fractions. Tie statistics count how often the
predictor had no strict neighbor majority and how those ties were settled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyLabeledSet, EmptyVocabulary, ExhaustedSpace, MissingGroundTruth
from .model import Dataset, Decision, LabeledExample, Scenario
from .predictor import Provenance, predict
from .weights import resolve_table

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Steele, Lea & Flood's 64-bit generator: one addition and three
    xor-shift-multiply mixes per output. State is a single 64-bit word."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n); rejection keeps it exactly uniform."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def coin(self) -> Decision:
        return Decision.from_int(self.randbelow(2))

    def sample(self, items: list, k: int) -> list:
        """k distinct items, order-sensitive, via partial Fisher-Yates."""
        pool = list(items)
        if not 0 <= k <= len(pool):
            raise ValueError("sample size out of range")
        for i in range(k):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


@dataclass(frozen=True)
class TestScenarioSpec:
    seed: int
    count: int | None = None  # None: half the row count, rounded up
    max_tags: int = 3
    vocabulary: tuple[str, ...] | None = None  # None: tags used in the rows

    def resolved_count(self, dataset: Dataset) -> int:
        if self.count is not None:
            return self.count
        return math.ceil(len(dataset.rows) / 2)

    def resolved_vocabulary(self, dataset: Dataset) -> list[int]:
        if self.vocabulary is None:
            return sorted(dataset.used_tag_ids())
        return sorted(dataset.universe.id_of(name) for name in self.vocabulary)


# Retries before the sampler stops trusting luck and fills the remainder
# by sweeping the space in canonical order (still deterministic).
_RETRY_BUDGET_BASE = 10_000
_RETRY_BUDGET_PER_SCENARIO = 200


def generate_tests(spec: TestScenarioSpec, dataset: Dataset) -> list[Scenario]:
    vocabulary = spec.resolved_vocabulary(dataset)
    if not vocabulary:
        raise EmptyVocabulary()
    count = spec.resolved_count(dataset)
    if count < 1:
        raise ValueError("count must be at least 1")
    if spec.max_tags < 1:
        raise ValueError("max_tags must be at least 1")
    top = min(spec.max_tags, len(vocabulary))

    vocab_set = set(vocabulary)
    training = {frozenset(row.scenario.members) for row in dataset.rows}
    in_space = sum(
        1 for t in training if len(t) <= top and t <= vocab_set
    )
    space = sum(math.comb(len(vocabulary), size) for size in range(1, top + 1))
    available = space - in_space
    if count > available:
        raise ExhaustedSpace(count, available)

    prng = SplitMix64(spec.seed)
    used = set(training)
    out: list[Scenario] = []
    budget = _RETRY_BUDGET_BASE + _RETRY_BUDGET_PER_SCENARIO * count
    while len(out) < count and budget > 0:
        budget -= 1
        size = 1 + prng.randbelow(top)
        members = frozenset(prng.sample(vocabulary, size))
        if members in used:
            continue
        used.add(members)
        out.append(Scenario(dataset.universe, tuple(sorted(members))))

    if len(out) < count:
        # Feasibility was proven above, so a canonical sweep always finishes.
        for size in range(1, top + 1):
            for combo in _combinations_sorted(vocabulary, size):
                members = frozenset(combo)
                if members in used:
                    continue
                used.add(members)
                out.append(Scenario(dataset.universe, combo))
                if len(out) == count:
                    return out
    return out


def _combinations_sorted(vocabulary: list[int], size: int):
    from itertools import combinations

    yield from combinations(vocabulary, size)


def coinflip_baseline(count: int, seed: int) -> list[Decision]:
    if count < 0:
        raise ValueError("count must be non-negative")
    prng = SplitMix64(seed)
    return [prng.coin() for _ in range(count)]


def mostfreq_baseline(labeled: list[LabeledExample]) -> Decision:
    if not labeled:
        raise EmptyLabeledSet()
    allow = sum(1 for e in labeled if e.decision is Decision.ALLOW)
    deny = len(labeled) - allow
    return Decision.ALLOW if allow > deny else Decision.DENY


GroundTruth = dict[str, Decision] | None


@dataclass(frozen=True)
class TargetReport:
    target: str
    test_count: int
    engine_accuracy: Fraction | None
    coinflip_accuracy: Fraction | None
    mostfreq_accuracy: Fraction | None
    no_majority_total: int
    resolved_by_elimination: int
    default_denied: int
    records: tuple[dict, ...]


@dataclass(frozen=True)
class EvalReport:
    seed: int
    targets: tuple[TargetReport, ...]

    def to_document(self) -> dict:
        return {
            "version": 1,
            "seed": self.seed,
            "targets": [
                {
                    "target": t.target,
                    "tests": t.test_count,
                    "accuracy": {
                        "engine": _fraction_field(t.engine_accuracy),
                        "coinflip": _fraction_field(t.coinflip_accuracy),
                        "mostfreq": _fraction_field(t.mostfreq_accuracy),
                    },
                    "ties": {
                        "no_majority_total": t.no_majority_total,
                        "resolved_by_elimination": t.resolved_by_elimination,
                        "default_denied": t.default_denied,
                    },
                    "records": list(t.records),
                }
                for t in self.targets
            ],
        }

    def format_table(self) -> str:
        header = f"{'target':<20} {'tests':>5} {'engine':>8} {'mostfreq':>8} {'coinflip':>8} {'ties':>5}"
        lines = [header, "-" * len(header)]
        for t in self.targets:
            lines.append(
                f"{t.target:<20} {t.test_count:>5} "
                f"{_fmt_acc(t.engine_accuracy):>8} "
                f"{_fmt_acc(t.mostfreq_accuracy):>8} "
                f"{_fmt_acc(t.coinflip_accuracy):>8} "
                f"{t.no_majority_total:>5}"
            )
        return "\n".join(lines)


def _fraction_field(value: Fraction | None) -> dict | None:
    if value is None:
        return None
    return {"exact": str(value), "value": float(value)}


def _fmt_acc(value: Fraction | None) -> str:
    return "-" if value is None else f"{float(value):.3f}"


def run_eval(
    dataset: Dataset,
    tests: list[tuple[Scenario, GroundTruth]],
    seed: int,
) -> EvalReport:
    """Score the predictor and both baselines per target.

    Every test must carry ground truth for every target, or none at all;
    without ground truth the accuracies are reported as absent while tie
    statistics still count. Per-target coin-flip seeds derive from the run
    seed through one SplitMix64 stream, in target declaration order.
    """
    for scenario, truth in tests:
        if truth is None:
            continue
        for target in dataset.targets:
            if target not in truth:
                raise MissingGroundTruth(
                    f"test {scenario!r} lacks a decision for target {target!r}"
                )
    has_truth = bool(tests) and all(truth is not None for _, truth in tests)
    if tests and not has_truth and any(truth is not None for _, truth in tests):
        raise MissingGroundTruth("tests mix labeled and unlabeled entries")

    seeder = SplitMix64(seed)
    reports = []
    for target in dataset.targets:
        labeled = dataset.per_target_view(target)
        table = resolve_table(dataset, target)
        coin_seed = seeder.next_u64()
        coins = coinflip_baseline(len(tests), coin_seed)
        constant = mostfreq_baseline(labeled) if labeled else None

        engine_hits = coin_hits = freq_hits = 0
        eliminations = denials = 0
        records = []
        for index, (scenario, truth) in enumerate(tests):
            prediction = predict(scenario, labeled, table)
            if prediction.provenance is Provenance.TIE_BREAK_ELIMINATION:
                eliminations += 1
            elif prediction.provenance is Provenance.DEFAULT_DENY:
                denials += 1
            record = {
                "query": list(scenario.names),
                "prediction": prediction.decision.word,
                "provenance": prediction.provenance.value,
                "ground_truth": None,
            }
            if truth is not None:
                expected = truth[target]
                record["ground_truth"] = expected.word
                record["correct"] = prediction.decision is expected
                engine_hits += prediction.decision is expected
                coin_hits += coins[index] is expected
                freq_hits += constant is expected
            records.append(record)

        n = len(tests)
        reports.append(
            TargetReport(
                target=target,
                test_count=n,
                engine_accuracy=Fraction(engine_hits, n) if has_truth else None,
                coinflip_accuracy=Fraction(coin_hits, n) if has_truth else None,
                mostfreq_accuracy=Fraction(freq_hits, n) if has_truth else None,
                no_majority_total=eliminations + denials,
                resolved_by_elimination=eliminations,
                default_denied=denials,
                records=tuple(records),
            )
        )
    return EvalReport(seed=seed, targets=tuple(reports))
