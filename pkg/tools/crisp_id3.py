"""
Crisp ID3 - Shannon entropy, information gain, tree growth and prediction

Continuous measurements are discretized by argmax membership over the same
fuzzy partitions the fuzzy builder uses, so the two methods differ only in
their split criterion. The growth loop and tree types here are shared with
tools.fuzzy_id3.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from tools.dataset import Dataset, FEATURE_NAMES, Instance, N_FEATURES
from tools.errors import TreeError
from tools.fuzzifier import FuzzyPartition, FuzzyVector, fuzzify, term_names

logger = logging.getLogger(__name__)

# (instance, its fuzzy vector) pairs are the unit every builder works on
Member = Tuple[Instance, FuzzyVector]


# ---------------------------------------------------------------------------
# Tree types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    class_label: str
    support: int

    def depth(self) -> int:
        return 0

    def leaf_count(self) -> int:
        return 1

    def to_dict(self) -> Dict[str, Any]:
        return {"class": self.class_label, "support": self.support}


@dataclass(frozen=True)
class Node:
    feature_index: int
    children: Tuple["DecisionTree", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise TreeError(f"a node needs at least 2 children, got {len(self.children)}")

    @property
    def k(self) -> int:
        return len(self.children)

    def depth(self) -> int:
        return 1 + max(child.depth() for child in self.children)

    def leaf_count(self) -> int:
        return sum(child.leaf_count() for child in self.children)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feature": self.feature_index,
            "feature_name": FEATURE_NAMES[self.feature_index],
            "children": {
                term: child.to_dict()
                for term, child in zip(term_names(self.k), self.children)
            },
        }


DecisionTree = Union[Leaf, Node]


def tree_from_dict(data: Mapping[str, Any]) -> DecisionTree:
    """Rebuild a tree from its JSON dump."""
    try:
        if "class" in data:
            return Leaf(str(data["class"]), int(data["support"]))
        children = data["children"]
        names = term_names(len(children))
        return Node(int(data["feature"]), tuple(tree_from_dict(children[name]) for name in names))
    except KeyError as e:
        raise TreeError(f"malformed tree document, missing {e}") from None


@dataclass(frozen=True)
class ClassDistribution:
    """Per-class instance counts at a node."""

    counts: Tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise TreeError(f"class counts must be non-negative, got {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def from_labels(cls, labels: Sequence[str], class_names: Sequence[str]) -> "ClassDistribution":
        index = {name: i for i, name in enumerate(class_names)}
        counts = [0] * len(class_names)
        for label in labels:
            counts[index[label]] += 1
        return cls(tuple(counts))

    def majority(self) -> int:
        """Index of the most frequent class; ties go to the lower index."""
        return int(np.argmax(self.counts))

    def is_pure(self) -> bool:
        return sum(1 for c in self.counts if c > 0) <= 1


@dataclass(frozen=True)
class SplitChoice:
    feature_index: int
    scores: Dict[int, float]
    prototypes: Optional[Dict[str, List[float]]] = None


@dataclass(frozen=True)
class SplitDiagnostics:
    """One split decision, recorded for verbose reports."""

    path: Tuple[Tuple[int, int], ...]
    feature_index: int
    criterion: str
    scores: Dict[int, float]
    support: int
    prototypes: Optional[Dict[str, List[float]]] = None

    def to_dict(self) -> Dict[str, Any]:
        result = {
            "path": [{"feature": f, "term": t} for f, t in self.path],
            "feature": self.feature_index,
            "criterion": self.criterion,
            "scores": {str(f): s for f, s in sorted(self.scores.items())},
            "support": self.support,
        }
        if self.prototypes is not None:
            result["prototypes"] = self.prototypes
        return result


# selector(members, candidates, class_names) -> SplitChoice
SplitSelector = Callable[[Sequence[Member], Sequence[int], Sequence[str]], SplitChoice]


# ---------------------------------------------------------------------------
# Entropy and information gain
# ---------------------------------------------------------------------------

def shannon_entropy(dist: ClassDistribution) -> float:
    """H = -sum p_i log2 p_i in bits, with 0*log2(0) taken as 0."""
    total = dist.total
    if total <= 0:
        raise TreeError("entropy of an empty class distribution is undefined")
    counts = np.asarray(dist.counts, dtype=float)
    p = counts[counts > 0] / total
    return max(0.0, float(-np.sum(p * np.log2(p))))


def information_gain(parent: ClassDistribution, children: Sequence[ClassDistribution]) -> float:
    """Entropy of the parent minus the size-weighted entropy of its children."""
    total = parent.total
    if sum(child.total for child in children) != total:
        raise TreeError(
            f"children totals {[c.total for c in children]} do not add up to parent total {total}"
        )
    residual = sum(
        (child.total / total) * shannon_entropy(child)
        for child in children if child.total > 0
    )
    return shannon_entropy(parent) - residual


def crispify(v: FuzzyVector) -> Tuple[int, ...]:
    """Linguistic term of maximum membership for every feature block."""
    return tuple(v.term_of(f) for f in range(v.n_blocks))


# ---------------------------------------------------------------------------
# Shared growth loop
# ---------------------------------------------------------------------------

def route(members: Sequence[Member], feature_index: int, k: int) -> List[List[Member]]:
    """Send every member down the branch of its argmax term on one feature."""
    branches: List[List[Member]] = [[] for _ in range(k)]
    for member in members:
        branches[member[1].term_of(feature_index)].append(member)
    return branches


def distribution_of(members: Sequence[Member], class_names: Sequence[str]) -> ClassDistribution:
    return ClassDistribution.from_labels([inst.class_label for inst, _ in members], class_names)


def grow_tree(members: Sequence[Member],
              class_names: Sequence[str],
              k: int,
              select: SplitSelector,
              criterion: str,
              diagnostics: Optional[List[SplitDiagnostics]] = None) -> DecisionTree:
    """
    Recursive top-down induction.

    Stops at pure nodes and when features run out; an empty branch becomes a
    leaf of its parent's majority class with support 0.
    """
    if not members:
        raise TreeError("cannot grow a tree from an empty training set")

    def _grow(node_members, candidates, path, fallback):
        if not node_members:
            return Leaf(fallback, 0)

        dist = distribution_of(node_members, class_names)
        majority = class_names[dist.majority()]
        if dist.is_pure() or not candidates:
            return Leaf(majority, len(node_members))

        choice = select(node_members, candidates, class_names)
        logger.debug("Split %s on feature %d (%s scores %s)",
                     path or "root", choice.feature_index, criterion, choice.scores)
        if diagnostics is not None:
            diagnostics.append(SplitDiagnostics(
                path=path,
                feature_index=choice.feature_index,
                criterion=criterion,
                scores=dict(choice.scores),
                support=len(node_members),
                prototypes=choice.prototypes,
            ))

        remaining = tuple(f for f in candidates if f != choice.feature_index)
        children = tuple(
            _grow(branch, remaining, path + ((choice.feature_index, term),), majority)
            for term, branch in enumerate(route(node_members, choice.feature_index, k))
        )
        return Node(choice.feature_index, children)

    return _grow(list(members), tuple(range(N_FEATURES)), (), class_names[0])


def descend(tree: DecisionTree, v: FuzzyVector) -> str:
    """Follow argmax-membership branches down to a leaf label."""
    while isinstance(tree, Node):
        if tree.k != v.k:
            raise TreeError(f"tree has {tree.k} branches per node but the vector uses k={v.k}")
        tree = tree.children[v.term_of(tree.feature_index)]
    return tree.class_label


def members_of(train: Dataset, partitions: Sequence[FuzzyPartition]) -> List[Member]:
    return [(inst, fuzzify(inst, partitions)) for inst in train.instances]


# ---------------------------------------------------------------------------
# ID3
# ---------------------------------------------------------------------------

def select_attribute_id3(members: Sequence[Member],
                         candidates: Sequence[int],
                         class_names: Sequence[str]) -> SplitChoice:
    """Candidate of maximum information gain; ties go to the lower index."""
    parent = distribution_of(members, class_names)
    k = members[0][1].k
    gains = {}
    for feature in sorted(candidates):
        children = [distribution_of(branch, class_names) for branch in route(members, feature, k)]
        gains[feature] = information_gain(parent, children)
    best = max(sorted(gains), key=lambda f: gains[f])
    return SplitChoice(best, gains)


def build_id3(train: Dataset,
              partitions: Sequence[FuzzyPartition],
              diagnostics: Optional[List[SplitDiagnostics]] = None) -> DecisionTree:
    if len(train) == 0:
        raise TreeError("cannot build an ID3 tree from an empty training set")
    members = members_of(train, partitions)
    k = members[0][1].k
    tree = grow_tree(members, train.class_names, k, select_attribute_id3, "information_gain", diagnostics)
    logger.debug("ID3 tree: depth %d, %d leaves", tree.depth(), tree.leaf_count())
    return tree


def predict(tree: DecisionTree, inst: Instance, partitions: Sequence[FuzzyPartition]) -> str:
    return descend(tree, fuzzify(inst, partitions))


__all__ = [
    "Member",
    "Leaf",
    "Node",
    "DecisionTree",
    "tree_from_dict",
    "ClassDistribution",
    "SplitChoice",
    "SplitDiagnostics",
    "shannon_entropy",
    "information_gain",
    "crispify",
    "route",
    "grow_tree",
    "descend",
    "members_of",
    "select_attribute_id3",
    "build_id3",
    "predict",
]
