"""Per-user, per-target allow/deny policies learned from labeled tag scenarios.

A scenario is a non-empty set of tags; a policy example pairs a scenario
with an allow or deny decision for one target action. New scenarios are
decided by the examples nearest under an exact rational similarity,
optionally weighted by a user-declared importance order over tag groups.
A guided review loop proposes label flips that reduce inconsistencies in
the example set, and an evaluation harness scores the predictor against
seeded baselines.
"""

from .errors import TagPolicyError
from .metric import WeightTable, mu, mu_weighted
from .model import (
    Dataset,
    DatasetRow,
    Decision,
    LabeledExample,
    Scenario,
    Universe,
    build_universe,
    make_scenario,
)
from .predictor import Prediction, Provenance, nearest_neighbors, predict
from .review import ReviewSession, build_graph, violations
from .weights import DatasetWeights, TagGroup, WeightConfig, synthesize_weights

__version__ = "1.0.0"

__all__ = [
    "Dataset",
    "DatasetRow",
    "DatasetWeights",
    "Decision",
    "LabeledExample",
    "Prediction",
    "Provenance",
    "ReviewSession",
    "Scenario",
    "TagGroup",
    "TagPolicyError",
    "Universe",
    "WeightConfig",
    "WeightTable",
    "build_graph",
    "build_universe",
    "make_scenario",
    "mu",
    "mu_weighted",
    "nearest_neighbors",
    "predict",
    "synthesize_weights",
    "violations",
    "__version__",
]
