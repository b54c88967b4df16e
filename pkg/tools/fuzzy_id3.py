"""
Fuzzy ID3 - distance-to-prototype uncertainty as the split criterion

The ID3 recursion is kept as is; only the impurity changes. For a set of
instances, every class present gets a prototype (its mean fuzzy vector).
Each instance's distance Z to its own class prototype is mapped to a
certainty in (0, 1], and the set's uncertainty is 1 minus the mean certainty.
A candidate feature is scored by the size-weighted uncertainty of the
branches it routes to; the lowest score wins.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, NewType, Optional, Sequence

import numpy as np

from tools.crisp_id3 import (
    DecisionTree,
    Member,
    SplitChoice,
    SplitDiagnostics,
    descend,
    grow_tree,
    members_of,
    route,
)
from tools.dataset import Dataset, Instance
from tools.errors import TreeError
from tools.fuzzifier import FuzzyPartition, FuzzyVector, average_vector, fuzzify

logger = logging.getLogger(__name__)

CertaintyScore = NewType("CertaintyScore", float)
CertaintyFn = Callable[[float], float]

PER_NODE = "per-node"
GLOBAL = "global"
PROTOTYPE_SCOPES = (PER_NODE, GLOBAL)


@dataclass(frozen=True)
class ClassPrototype:
    """Mean membership vector of one class over a set of instances."""

    class_label: str
    average: FuzzyVector


def _check_z(z: float) -> float:
    z = float(z)
    if not math.isfinite(z) or z < 0:
        raise TreeError(f"distance must be finite and non-negative, got {z}")
    return z


def certainty(z: float) -> CertaintyScore:
    """exp(-z): 1 at zero distance, decaying towards 0."""
    return CertaintyScore(math.exp(-_check_z(z)))


def reciprocal_certainty(z: float) -> CertaintyScore:
    """1 / (1 + z), the slower-decaying alternative."""
    return CertaintyScore(1.0 / (1.0 + _check_z(z)))


CERTAINTY_MAPPINGS: Dict[str, CertaintyFn] = {
    "exp": certainty,
    "reciprocal": reciprocal_certainty,
}


def certainty_mapping(name: str) -> CertaintyFn:
    try:
        return CERTAINTY_MAPPINGS[name]
    except KeyError:
        raise TreeError(
            f"unknown certainty mapping {name!r}; choose from {sorted(CERTAINTY_MAPPINGS)}"
        ) from None


def distance(f: FuzzyVector, avg: FuzzyVector) -> float:
    """Euclidean distance between two fuzzy vectors of one dimension."""
    if f.dimension != avg.dimension:
        raise TreeError(f"dimension mismatch: {f.dimension} vs {avg.dimension}")
    return float(np.linalg.norm(f.degrees - avg.degrees))


def class_prototypes(subset: Sequence[Member]) -> Dict[str, ClassPrototype]:
    """One prototype per class present in the subset, in first-seen order."""
    grouped: Dict[str, List[FuzzyVector]] = {}
    for inst, vector in subset:
        grouped.setdefault(inst.class_label, []).append(vector)
    return {
        label: ClassPrototype(label, average_vector(vectors))
        for label, vectors in grouped.items()
    }


def subset_uncertainty(subset: Sequence[Member],
                       prototypes: Mapping[str, ClassPrototype],
                       certainty_fn: CertaintyFn = certainty) -> float:
    """U = 1 - mean certainty of each instance w.r.t. its class prototype; 0 when empty."""
    if not subset:
        return 0.0

    certainties = []
    for inst, vector in subset:
        prototype = prototypes.get(inst.class_label)
        if prototype is None:
            raise TreeError(f"no prototype for class {inst.class_label!r}")
        certainties.append(certainty_fn(distance(vector, prototype.average)))

    return 1.0 - math.fsum(certainties) / len(certainties)


def score_attributes_fuzzy(node_set: Sequence[Member],
                           candidate_features: Sequence[int],
                           certainty_fn: CertaintyFn = certainty,
                           prototypes: Optional[Mapping[str, ClassPrototype]] = None) -> Dict[int, float]:
    """
    Weighted branch uncertainty for every candidate feature.

    With prototypes=None each branch computes its own prototypes; otherwise
    the given (global) prototypes are used everywhere.
    """
    if not node_set:
        raise TreeError("cannot score attributes on an empty node set")
    if not candidate_features:
        raise TreeError("no candidate features to score")

    k = node_set[0][1].k
    total = len(node_set)
    scores = {}
    for feature in sorted(candidate_features):
        score = 0.0
        for branch in route(node_set, feature, k):
            if not branch:
                continue
            branch_prototypes = prototypes if prototypes is not None else class_prototypes(branch)
            score += (len(branch) / total) * subset_uncertainty(branch, branch_prototypes, certainty_fn)
        scores[feature] = score
    return scores


def select_attribute_fuzzy(node_set: Sequence[Member],
                           candidate_features: Sequence[int],
                           certainty_fn: CertaintyFn = certainty,
                           prototypes: Optional[Mapping[str, ClassPrototype]] = None) -> int:
    """Feature of minimum weighted uncertainty; ties go to the lower index."""
    scores = score_attributes_fuzzy(node_set, candidate_features, certainty_fn, prototypes)
    return min(sorted(scores), key=lambda f: scores[f])


def _prototype_dump(prototypes: Mapping[str, ClassPrototype]) -> Dict[str, List[float]]:
    return {label: p.average.tolist() for label, p in prototypes.items()}


def build_fuzzy_tree(train: Dataset,
                     partitions: Sequence[FuzzyPartition],
                     certainty_fn: CertaintyFn = certainty,
                     prototype_scope: str = PER_NODE,
                     diagnostics: Optional[List[SplitDiagnostics]] = None) -> DecisionTree:
    """
    ID3 recursion with the fuzzy split criterion.

    prototype_scope "per-node" recomputes prototypes inside every branch under
    evaluation; "global" computes them once from the whole training set.
    """
    if len(train) == 0:
        raise TreeError("cannot build a fuzzy tree from an empty training set")
    if prototype_scope not in PROTOTYPE_SCOPES:
        raise TreeError(f"prototype_scope must be one of {PROTOTYPE_SCOPES}, got {prototype_scope!r}")

    members = members_of(train, partitions)
    k = members[0][1].k
    fixed = class_prototypes(members) if prototype_scope == GLOBAL else None

    def select(node_set, candidates, class_names):
        scores = score_attributes_fuzzy(node_set, candidates, certainty_fn, fixed)
        best = min(sorted(scores), key=lambda f: scores[f])
        shown = fixed if fixed is not None else class_prototypes(node_set)
        return SplitChoice(best, scores, _prototype_dump(shown) if diagnostics is not None else None)

    tree = grow_tree(members, train.class_names, k, select, "fuzzy_uncertainty", diagnostics)
    logger.debug("Fuzzy tree (%s prototypes): depth %d, %d leaves",
                 prototype_scope, tree.depth(), tree.leaf_count())
    return tree


def predict_fuzzy(tree: DecisionTree, inst: Instance, partitions: Sequence[FuzzyPartition]) -> str:
    return descend(tree, fuzzify(inst, partitions))


__all__ = [
    "CertaintyScore",
    "ClassPrototype",
    "PER_NODE",
    "GLOBAL",
    "PROTOTYPE_SCOPES",
    "CERTAINTY_MAPPINGS",
    "certainty",
    "reciprocal_certainty",
    "certainty_mapping",
    "distance",
    "class_prototypes",
    "subset_uncertainty",
    "score_attributes_fuzzy",
    "select_attribute_fuzzy",
    "build_fuzzy_tree",
    "predict_fuzzy",
]
