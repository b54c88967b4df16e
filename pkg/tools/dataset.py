"""
Dataset - Iris CSV ingestion and the pairwise five-fold protocol

Rows are four comma-separated measurements (cm) followed by a species label.
A header is recognised by a non-numeric first field. Instance order is kept
exactly as in the file because fold membership is positional.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from tools.errors import DatasetError

logger = logging.getLogger(__name__)

FEATURE_NAMES = ("sepal_length", "sepal_width", "petal_length", "petal_width")
N_FEATURES = len(FEATURE_NAMES)
N_FOLDS = 5
DEFAULT_FOLD_SIZE = 10


@dataclass(frozen=True)
class Instance:
    """One flower: four measurements and its species."""

    features: Tuple[float, ...]
    class_label: str

    def __post_init__(self):
        features = tuple(float(v) for v in self.features)
        if len(features) != N_FEATURES:
            raise DatasetError(f"expected {N_FEATURES} features, got {len(features)}")
        for name, value in zip(FEATURE_NAMES, features):
            if not math.isfinite(value):
                raise DatasetError(f"{name} is not finite: {value}")
            if value < 0:
                raise DatasetError(f"{name} is negative: {value}")
        object.__setattr__(self, "features", features)


@dataclass(frozen=True)
class Dataset:
    instances: Tuple[Instance, ...]
    class_names: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "class_names", tuple(self.class_names))
        if len(set(self.class_names)) != len(self.class_names):
            raise DatasetError(f"duplicate class names: {list(self.class_names)}")
        known = set(self.class_names)
        for instance in self.instances:
            if instance.class_label not in known:
                raise DatasetError(f"instance label {instance.class_label!r} not in class names")

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self) -> Iterator[Instance]:
        return iter(self.instances)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(inst.class_label for inst in self.instances)

    def feature_matrix(self) -> np.ndarray:
        """(n, 4) array of measurements in instance order."""
        if not self.instances:
            return np.empty((0, N_FEATURES))
        return np.array([inst.features for inst in self.instances], dtype=float)

    def class_counts(self) -> Dict[str, int]:
        counts = {name: 0 for name in self.class_names}
        for inst in self.instances:
            counts[inst.class_label] += 1
        return counts

    def of_class(self, label: str) -> Tuple[Instance, ...]:
        return tuple(inst for inst in self.instances if inst.class_label == label)


@dataclass(frozen=True)
class FoldSplit:
    fold_index: int
    train: Dataset
    test: Dataset


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def _read_text(path: Path) -> str:
    """File contents as text; undecodable bytes and NULs are reported by line."""
    raw = path.read_bytes()
    try:
        text = raw.decode('utf-8-sig')
    except UnicodeDecodeError as e:
        line_number = raw.count(b"\n", 0, e.start) + 1
        raise DatasetError(f"not valid UTF-8 text ({e.reason} at byte {e.start})", line_number) from None
    nul = text.find("\x00")
    if nul >= 0:
        raise DatasetError("line contains a NUL byte", text.count("\n", 0, nul) + 1)
    return text


def load_iris(path: Union[str, Path]) -> Dataset:
    """
    Load an Iris-format CSV.

    Args:
        path: CSV file location (UTF-8, LF or CRLF)

    Returns:
        Dataset in file order, class names ordered by first appearance

    Raises:
        DatasetError: missing file, empty file, undecodable bytes, wrong field
            count, bad number
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"data file not found: {path}")

    instances: List[Instance] = []
    class_names: List[str] = []
    seen_first_row = False

    reader = csv.reader(io.StringIO(_read_text(path), newline=''))
    try:
        rows = list(reader)
    except csv.Error as e:
        raise DatasetError(f"unreadable CSV row: {e}", reader.line_num) from None

    for line_number, row in enumerate(rows, start=1):
        fields = [field.strip() for field in row]
        if not fields or all(not field for field in fields):
            continue

        if not seen_first_row:
            seen_first_row = True
            if not _is_number(fields[0]):
                logger.debug("Skipping header on line %d", line_number)
                continue

        if len(fields) != N_FEATURES + 1:
            raise DatasetError(
                f"expected {N_FEATURES + 1} fields, got {len(fields)}", line_number
            )

        values = []
        for name, field in zip(FEATURE_NAMES, fields[:N_FEATURES]):
            try:
                values.append(float(field))
            except ValueError:
                raise DatasetError(f"{name} is not numeric: {field!r}", line_number) from None

        label = fields[N_FEATURES]
        if not label:
            raise DatasetError("empty class label", line_number)

        try:
            instances.append(Instance(tuple(values), label))
        except DatasetError as e:
            raise DatasetError(str(e), line_number) from None

        if label not in class_names:
            class_names.append(label)

    if not instances:
        raise DatasetError(f"no rows in {path}")

    logger.info("Loaded %d instances, %d classes from %s", len(instances), len(class_names), path)
    return Dataset(tuple(instances), tuple(class_names))


def class_by_group(d: Dataset, group: int) -> str:
    """Label of the 1-based group number (file order of first appearance)."""
    if not 1 <= group <= len(d.class_names):
        raise DatasetError(f"unknown class group {group}; dataset has {len(d.class_names)} classes")
    return d.class_names[group - 1]


def pairwise_subset(d: Dataset, class_a: str, class_b: str) -> Dataset:
    """Keep only the two classes, original order preserved."""
    for label in (class_a, class_b):
        if label not in d.class_names:
            raise DatasetError(f"unknown class: {label!r}")
    if class_a == class_b:
        raise DatasetError(f"class pair must name two different classes, got {class_a!r} twice")

    kept = tuple(inst for inst in d.instances if inst.class_label in (class_a, class_b))
    return Dataset(kept, (class_a, class_b))


def five_fold_splits(d: Dataset, fold_size: int = DEFAULT_FOLD_SIZE) -> Tuple[FoldSplit, ...]:
    """
    Positional pairwise five-fold splits.

    Fold j tests, for each class, the instances at within-class positions
    [j*fold_size, (j+1)*fold_size); every other instance trains.
    """
    if fold_size < 1:
        raise DatasetError(f"fold_size must be positive, got {fold_size}")
    if len(d.class_names) != 2:
        raise DatasetError(f"five-fold protocol needs exactly 2 classes, got {len(d.class_names)}")

    expected = N_FOLDS * fold_size
    counts = d.class_counts()
    for label, count in counts.items():
        if count != expected:
            raise DatasetError(
                f"class {label!r} has {count} instances; "
                f"{N_FOLDS} folds of {fold_size} need exactly {expected}"
            )

    # within-class position of every instance
    positions: List[int] = []
    seen = {name: 0 for name in d.class_names}
    for inst in d.instances:
        positions.append(seen[inst.class_label])
        seen[inst.class_label] += 1

    splits = []
    for fold in range(N_FOLDS):
        lo, hi = fold * fold_size, (fold + 1) * fold_size
        test = tuple(inst for inst, pos in zip(d.instances, positions) if lo <= pos < hi)
        train = tuple(inst for inst, pos in zip(d.instances, positions) if not lo <= pos < hi)
        splits.append(FoldSplit(fold, Dataset(train, d.class_names), Dataset(test, d.class_names)))

    return tuple(splits)


def feature_column(instances: Sequence[Instance], feature_index: int) -> List[float]:
    return [inst.features[feature_index] for inst in instances]


__all__ = [
    "FEATURE_NAMES",
    "N_FEATURES",
    "N_FOLDS",
    "DEFAULT_FOLD_SIZE",
    "Instance",
    "Dataset",
    "FoldSplit",
    "load_iris",
    "class_by_group",
    "pairwise_subset",
    "five_fold_splits",
    "feature_column",
]
