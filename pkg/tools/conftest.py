"""
Shared fixtures: the bundled Iris file, a CSV writer for malformed inputs and
small synthetic datasets with known split behaviour.
"""

from pathlib import Path
from typing import Callable, Sequence, Tuple

import pytest

from tools.dataset import Dataset, Instance, load_iris

PROJECT_ROOT = Path(__file__).resolve().parent.parent
IRIS_PATH = PROJECT_ROOT / "data" / "iris.csv"

SETOSA = "Iris-setosa"
VERSICOLOR = "Iris-versicolor"
VIRGINICA = "Iris-virginica"


def make_dataset(rows: Sequence[Tuple[float, float, float, float, str]],
                 class_names: Sequence[str] = None) -> Dataset:
    instances = tuple(Instance(tuple(row[:4]), row[4]) for row in rows)
    if class_names is None:
        class_names = []
        for inst in instances:
            if inst.class_label not in class_names:
                class_names.append(inst.class_label)
    return Dataset(instances, tuple(class_names))


@pytest.fixture(scope="session")
def iris_path() -> Path:
    return IRIS_PATH


@pytest.fixture(scope="session")
def iris(iris_path) -> Dataset:
    return load_iris(iris_path)


@pytest.fixture
def write_csv(tmp_path) -> Callable[[str], Path]:
    """Write raw text to a CSV file under tmp_path and return its path."""
    def _write(text: str, name: str = "data.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def separable_on_petal_length() -> Dataset:
    """Feature 2 alone separates A from B; features 0, 1 and 3 are mixed."""
    return make_dataset([
        (0, 0, 0, 0, "A"),
        (10, 10, 0, 10, "A"),
        (0, 10, 0, 10, "A"),
        (0, 0, 10, 0, "B"),
        (10, 10, 10, 10, "B"),
        (10, 0, 10, 0, "B"),
    ])


@pytest.fixture
def single_class() -> Dataset:
    return make_dataset([
        (1, 2, 3, 4, "A"),
        (2, 3, 4, 5, "A"),
        (3, 4, 5, 6, "A"),
    ], class_names=("A", "B"))
