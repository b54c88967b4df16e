"""
Fuzzifier - triangular fuzzy partitions and membership vectors

Each feature's training range is covered by k triangular terms whose centers
are evenly spaced from the minimum to the maximum. The end terms are
shouldered, so values outside the range saturate the nearest extreme term and
memberships always sum to 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple, Any

import numpy as np

from tools.dataset import Dataset, FEATURE_NAMES, Instance, N_FEATURES, feature_column
from tools.errors import PartitionError

logger = logging.getLogger(__name__)

DEGENERATE_EPSILON = 1e-6
UNITY_TOLERANCE = 1e-9

TERM_NAMES = {
    2: ("Low", "High"),
    3: ("Low", "Medium", "High"),
}


def term_names(k: int) -> Tuple[str, ...]:
    return TERM_NAMES.get(k, tuple(f"T{j}" for j in range(k)))


@dataclass(frozen=True)
class FuzzyPartition:
    """k triangular membership functions over one feature."""

    feature_index: int
    centers: Tuple[float, ...]

    def __post_init__(self):
        centers = tuple(float(c) for c in self.centers)
        if not 0 <= self.feature_index < N_FEATURES:
            raise PartitionError(f"feature_index must be in [0, {N_FEATURES}), got {self.feature_index}")
        if len(centers) < 2:
            raise PartitionError(f"a partition needs at least 2 centers, got {len(centers)}")
        if not all(math.isfinite(c) for c in centers):
            raise PartitionError(f"centers must be finite: {centers}")
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise PartitionError(f"centers must be strictly increasing: {centers}")
        object.__setattr__(self, "centers", centers)

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def term_names(self) -> Tuple[str, ...]:
        return term_names(self.k)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "feature_index": self.feature_index,
            "feature": FEATURE_NAMES[self.feature_index],
            "centers": list(self.centers),
        }


@dataclass(frozen=True, eq=False)
class FuzzyVector:
    """
    Membership degrees of one instance, laid out as consecutive blocks of k
    (one block per feature, feature order; within a block, center order).
    """

    degrees: np.ndarray
    k: int

    def __post_init__(self):
        degrees = np.array(self.degrees, dtype=float)
        if self.k < 2:
            raise PartitionError(f"k must be >= 2, got {self.k}")
        if degrees.ndim != 1 or degrees.size == 0 or degrees.size % self.k:
            raise PartitionError(f"dimension {degrees.size} is not a positive multiple of k={self.k}")
        if np.any(degrees < -UNITY_TOLERANCE) or np.any(degrees > 1 + UNITY_TOLERANCE):
            raise PartitionError("membership degrees must lie in [0, 1]")
        sums = degrees.reshape(-1, self.k).sum(axis=1)
        if np.any(np.abs(sums - 1.0) > UNITY_TOLERANCE):
            raise PartitionError(f"each block must sum to 1, got {sums.tolist()}")
        degrees.setflags(write=False)
        object.__setattr__(self, "degrees", degrees)

    @property
    def dimension(self) -> int:
        return int(self.degrees.size)

    @property
    def n_blocks(self) -> int:
        return self.dimension // self.k

    def __len__(self) -> int:
        return self.dimension

    def __eq__(self, other) -> bool:
        if not isinstance(other, FuzzyVector):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.degrees, other.degrees)

    def block(self, feature_index: int) -> np.ndarray:
        return self.degrees[feature_index * self.k:(feature_index + 1) * self.k]

    def blocks(self) -> np.ndarray:
        return self.degrees.reshape(-1, self.k)

    def term_of(self, feature_index: int) -> int:
        """Term of maximum membership in one block; ties go to the lower index."""
        return int(np.argmax(self.block(feature_index)))

    def tolist(self) -> List[float]:
        return self.degrees.tolist()


def build_partition(values: Iterable[float],
                    feature_index: int,
                    k: int,
                    epsilon: float = DEGENERATE_EPSILON) -> FuzzyPartition:
    """
    Evenly spaced centers from min(values) to max(values).

    A constant feature (max == min) gets centers min + j*epsilon instead.
    """
    values = np.asarray(list(values), dtype=float)
    if values.size == 0:
        raise PartitionError(f"cannot build a partition for feature {feature_index} from no values")
    if k < 2:
        raise PartitionError(f"k must be >= 2, got {k}")
    if not np.all(np.isfinite(values)):
        raise PartitionError(f"feature {feature_index} has non-finite values")

    lo, hi = float(values.min()), float(values.max())
    centers = np.linspace(lo, hi, k)
    # a range narrower than float spacing collapses neighbouring centers too
    if hi == lo or np.any(np.diff(centers) <= 0):
        logger.warning("Feature %d is degenerate on [%r, %r]; widening by %g", feature_index, lo, hi, epsilon)
        centers = lo + epsilon * np.arange(k)

    return FuzzyPartition(feature_index, tuple(centers.tolist()))


def fit_partitions(train: Dataset,
                   k: int,
                   epsilon: float = DEGENERATE_EPSILON) -> Tuple[FuzzyPartition, ...]:
    """One partition per feature, fit on training instances only."""
    return tuple(
        build_partition(feature_column(train.instances, f), f, k, epsilon)
        for f in range(N_FEATURES)
    )


def membership(p: FuzzyPartition, x: float) -> np.ndarray:
    """Degrees of x in each of the k terms of p."""
    x = float(x)
    if not math.isfinite(x):
        raise PartitionError(f"cannot fuzzify non-finite value {x}")

    centers = p.centers
    degrees = np.zeros(p.k)
    if x <= centers[0]:
        degrees[0] = 1.0
    elif x >= centers[-1]:
        degrees[-1] = 1.0
    else:
        i = int(np.searchsorted(centers, x, side="right")) - 1
        t = (x - centers[i]) / (centers[i + 1] - centers[i])
        degrees[i] = 1.0 - t
        degrees[i + 1] = t
    return degrees


def _check_partitions(partitions: Sequence[FuzzyPartition]) -> int:
    if sorted(p.feature_index for p in partitions) != list(range(N_FEATURES)):
        raise PartitionError(
            f"partitions must cover features 0..{N_FEATURES - 1} once each, "
            f"got {[p.feature_index for p in partitions]}"
        )
    ks = {p.k for p in partitions}
    if len(ks) != 1:
        raise PartitionError(f"all partitions must share one k, got {sorted(ks)}")
    return ks.pop()


def fuzzify(inst: Instance, partitions: Sequence[FuzzyPartition]) -> FuzzyVector:
    """Concatenated memberships of every feature, in feature order."""
    k = _check_partitions(partitions)
    ordered = sorted(partitions, key=lambda p: p.feature_index)
    degrees = np.concatenate([membership(p, inst.features[p.feature_index]) for p in ordered])
    return FuzzyVector(degrees, k)


def fuzzify_dataset(d: Dataset, partitions: Sequence[FuzzyPartition]) -> Tuple[FuzzyVector, ...]:
    return tuple(fuzzify(inst, partitions) for inst in d.instances)


def average_vector(vectors: Sequence[FuzzyVector]) -> FuzzyVector:
    """Componentwise mean of fuzzy vectors sharing one layout."""
    vectors = list(vectors)
    if not vectors:
        raise PartitionError("cannot average an empty list of fuzzy vectors")
    layouts = {(v.dimension, v.k) for v in vectors}
    if len(layouts) != 1:
        raise PartitionError(f"fuzzy vectors have mixed layouts: {sorted(layouts)}")

    k = vectors[0].k
    mean = np.mean(np.stack([v.degrees for v in vectors]), axis=0)
    return FuzzyVector(mean, k)


__all__ = [
    "DEGENERATE_EPSILON",
    "TERM_NAMES",
    "term_names",
    "FuzzyPartition",
    "FuzzyVector",
    "build_partition",
    "fit_partitions",
    "membership",
    "fuzzify",
    "fuzzify_dataset",
    "average_vector",
]
