"""
Evaluation - pairwise five-fold cross-validation for both tree builders

For a class pair, each fold fits fuzzy partitions on its training part,
builds the chosen tree, predicts the test part and records the (A, B, C, D)
confusion counts. Results are ordered by fold index whatever the execution
order.
"""

import hashlib
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from tools.crisp_id3 import DecisionTree, SplitDiagnostics, build_id3, predict
from tools.dataset import DEFAULT_FOLD_SIZE, Dataset, FoldSplit, class_by_group, five_fold_splits, pairwise_subset
from tools.errors import EvaluationError
from tools.fuzzifier import DEGENERATE_EPSILON, FuzzyPartition, fit_partitions
from tools.fuzzy_id3 import PER_NODE, build_fuzzy_tree, certainty_mapping, predict_fuzzy

logger = logging.getLogger(__name__)

ID3 = "id3"
FUZZY = "fuzzy"
METHODS = (ID3, FUZZY)

# 1-based group numbers, file order of first appearance
ALL_PAIRS = ((1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class ConfusionRecord:
    """
    Pairwise confusion counts.

    a: predicted first, truly first     b: predicted first, truly second
    c: predicted second, truly first    d: predicted second, truly second
    """

    a: int
    b: int
    c: int
    d: int
    fold_index: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) < 0:
                raise EvaluationError(f"confusion count {name} must be non-negative")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    def to_dict(self) -> Dict[str, int]:
        return {"fold": self.fold_index, "a": self.a, "b": self.b, "c": self.c, "d": self.d}


@dataclass(frozen=True)
class FoldOutcome:
    record: ConfusionRecord
    partitions: Tuple[FuzzyPartition, ...]
    tree: DecisionTree
    fingerprint: str
    diagnostics: Tuple[SplitDiagnostics, ...] = ()


@dataclass(frozen=True)
class ExperimentResult:
    method: str
    class_pair: Tuple[str, str]
    records: Tuple[ConfusionRecord, ...]
    mean_accuracy: float
    folds: Tuple[FoldOutcome, ...] = field(default=(), compare=False, repr=False)

    @property
    def error_rate(self) -> float:
        return 1.0 - self.mean_accuracy

    @property
    def fold_accuracies(self) -> Tuple[float, ...]:
        return tuple(accuracy(r) for r in self.records)

    @property
    def fingerprints(self) -> Tuple[str, ...]:
        return tuple(f.fingerprint for f in self.folds)

    def to_dict(self, verbose: bool = False) -> Dict[str, Any]:
        result = {
            "method": self.method,
            "pair": list(self.class_pair),
            "records": [r.to_dict() for r in self.records],
            "mean_accuracy": self.mean_accuracy,
        }
        if verbose:
            result["diagnostics"] = [
                {"fold": f.record.fold_index, "splits": [d.to_dict() for d in f.diagnostics]}
                for f in self.folds
            ]
        return result


@dataclass(frozen=True)
class Comparison:
    class_pair: Tuple[str, str]
    id3: ExperimentResult
    fuzzy: ExperimentResult

    @property
    def deltas(self) -> Tuple[float, ...]:
        """Fuzzy minus ID3 accuracy, per fold."""
        return tuple(f - i for f, i in zip(self.fuzzy.fold_accuracies, self.id3.fold_accuracies))

    @property
    def mean_delta(self) -> float:
        return self.fuzzy.mean_accuracy - self.id3.mean_accuracy

    @property
    def shared_folds(self) -> bool:
        return self.id3.fingerprints == self.fuzzy.fingerprints


def confusion_pairwise(predicted: Sequence[str],
                       truth: Sequence[str],
                       class_pair: Tuple[str, str],
                       fold_index: int = 0) -> ConfusionRecord:
    if len(predicted) != len(truth):
        raise EvaluationError(f"{len(predicted)} predictions for {len(truth)} true labels")
    first, second = class_pair
    counts = {(first, first): 0, (first, second): 0, (second, first): 0, (second, second): 0}
    for p, t in zip(predicted, truth):
        if (p, t) not in counts:
            foreign = p if p not in class_pair else t
            raise EvaluationError(f"label {foreign!r} is outside the pair {list(class_pair)}")
        counts[(p, t)] += 1
    return ConfusionRecord(
        a=counts[(first, first)],
        b=counts[(first, second)],
        c=counts[(second, first)],
        d=counts[(second, second)],
        fold_index=fold_index,
    )


def accuracy(r: ConfusionRecord) -> float:
    if r.total <= 0:
        raise EvaluationError("accuracy of an empty confusion record is undefined")
    return (r.a + r.d) / r.total


def error_rate(r: ConfusionRecord) -> float:
    if r.total <= 0:
        raise EvaluationError("error rate of an empty confusion record is undefined")
    return (r.b + r.c) / r.total


def mean_accuracy(records: Sequence[ConfusionRecord]) -> float:
    if not records:
        raise EvaluationError("no confusion records to average")
    return math.fsum(accuracy(r) for r in records) / len(records)


def fold_fingerprint(split: FoldSplit) -> str:
    """Stable digest of a fold's test set."""
    payload = [[list(inst.features), inst.class_label] for inst in split.test.instances]
    return hashlib.md5(json.dumps(payload).encode()).hexdigest()


def resolve_pair(d: Dataset, groups: Tuple[int, int]) -> Tuple[str, str]:
    return class_by_group(d, groups[0]), class_by_group(d, groups[1])


def _run_fold(split: FoldSplit,
              method: str,
              class_pair: Tuple[str, str],
              k: int,
              certainty: str,
              prototype_scope: str,
              epsilon: float,
              collect_diagnostics: bool) -> FoldOutcome:
    partitions = fit_partitions(split.train, k, epsilon)
    diagnostics: Optional[List[SplitDiagnostics]] = [] if collect_diagnostics else None

    if method == ID3:
        tree = build_id3(split.train, partitions, diagnostics)
        predicted = [predict(tree, inst, partitions) for inst in split.test]
    else:
        tree = build_fuzzy_tree(split.train, partitions, certainty_mapping(certainty),
                                prototype_scope, diagnostics)
        predicted = [predict_fuzzy(tree, inst, partitions) for inst in split.test]

    record = confusion_pairwise(predicted, split.test.labels, class_pair, split.fold_index)
    logger.info("%s %s fold %d: A=%d B=%d C=%d D=%d",
                method, "/".join(class_pair), split.fold_index, record.a, record.b, record.c, record.d)
    return FoldOutcome(record, partitions, tree, fold_fingerprint(split), tuple(diagnostics or ()))


def run_on_splits(splits: Sequence[FoldSplit],
                  method: str,
                  class_pair: Tuple[str, str],
                  k: int = 2,
                  certainty: str = "exp",
                  prototype_scope: str = PER_NODE,
                  epsilon: float = DEGENERATE_EPSILON,
                  workers: int = 1,
                  collect_diagnostics: bool = False) -> ExperimentResult:
    if method not in METHODS:
        raise EvaluationError(f"unknown method {method!r}; choose from {METHODS}")

    def run(split):
        return _run_fold(split, method, class_pair, k, certainty, prototype_scope,
                         epsilon, collect_diagnostics)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, splits))
    else:
        outcomes = [run(split) for split in splits]

    outcomes.sort(key=lambda o: o.record.fold_index)
    records = tuple(o.record for o in outcomes)
    return ExperimentResult(method, tuple(class_pair), records, mean_accuracy(records), tuple(outcomes))


def run_experiment(d: Dataset,
                   method: str,
                   class_pair: Tuple[str, str],
                   k: int = 2,
                   fold_size: int = DEFAULT_FOLD_SIZE,
                   certainty: str = "exp",
                   prototype_scope: str = PER_NODE,
                   epsilon: float = DEGENERATE_EPSILON,
                   workers: int = 1,
                   collect_diagnostics: bool = False) -> ExperimentResult:
    """
    Pairwise five-fold cross-validation of one method.

    Args:
        d: full dataset
        method: "id3" or "fuzzy"
        class_pair: the two class labels; the first is "group 1" of the confusion record
        k: linguistic terms per feature
    """
    pairwise = pairwise_subset(d, *class_pair)
    splits = five_fold_splits(pairwise, fold_size)
    return run_on_splits(splits, method, class_pair, k, certainty, prototype_scope,
                         epsilon, workers, collect_diagnostics)


def compare_methods(d: Dataset,
                    class_pair: Tuple[str, str],
                    k: int = 2,
                    fold_size: int = DEFAULT_FOLD_SIZE,
                    certainty: str = "exp",
                    prototype_scope: str = PER_NODE,
                    epsilon: float = DEGENERATE_EPSILON,
                    workers: int = 1,
                    collect_diagnostics: bool = False) -> Comparison:
    """Both methods on one shared set of folds."""
    pairwise = pairwise_subset(d, *class_pair)
    splits = five_fold_splits(pairwise, fold_size)
    results = {
        method: run_on_splits(splits, method, class_pair, k, certainty, prototype_scope,
                              epsilon, workers, collect_diagnostics)
        for method in METHODS
    }
    return Comparison(tuple(class_pair), results[ID3], results[FUZZY])


def run_all_pairs(d: Dataset, method: str, k: int = 2, **options) -> List[ExperimentResult]:
    return [run_experiment(d, method, resolve_pair(d, groups), k, **options) for groups in ALL_PAIRS]


__all__ = [
    "ID3",
    "FUZZY",
    "METHODS",
    "ALL_PAIRS",
    "ConfusionRecord",
    "FoldOutcome",
    "ExperimentResult",
    "Comparison",
    "confusion_pairwise",
    "accuracy",
    "error_rate",
    "mean_accuracy",
    "fold_fingerprint",
    "resolve_pair",
    "run_on_splits",
    "run_experiment",
    "compare_methods",
    "run_all_pairs",
]
