"""
Fuzzy ID3 Toolkit

Decision-tree induction on the Iris data set with two split criteria:
- classical ID3 (Shannon entropy / information gain over crisp linguistic terms)
- a fuzzy criterion scoring each branch by how close instances sit to their
  class-average membership vector

This package provides:
- Iris CSV ingestion and the pairwise five-fold protocol
- Triangular fuzzy partitions and membership vectors
- Both tree builders and their predictors
- Confusion records, accuracies and method comparison
- A batch command-line surface (tools/cli.py)
"""

__version__ = "0.1.0"
__description__ = "ID3 and distance-certainty fuzzy decision trees for Iris"

version_info = tuple(map(int, __version__.split(".")))

__all__ = [
    "__version__",
    "version_info",
]
