"""
Exception hierarchy for the fuzzy ID3 toolkit.

Every error raised on bad input derives from both FuzzyTreeError and
ValueError, so callers can catch either the toolkit root or the builtin.
"""

from typing import Optional


class FuzzyTreeError(Exception):
    """Root of all toolkit errors"""


class DatasetError(FuzzyTreeError, ValueError):
    """Malformed, missing or inconsistent data"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PartitionError(FuzzyTreeError, ValueError):
    """Invalid fuzzy partition or fuzzy vector"""


class TreeError(FuzzyTreeError, ValueError):
    """Tree induction or prediction precondition violated"""


class EvaluationError(FuzzyTreeError, ValueError):
    """Confusion counting or experiment setup failed"""


class ConfigError(FuzzyTreeError, ValueError):
    """Invalid run configuration"""


__all__ = [
    "FuzzyTreeError",
    "DatasetError",
    "PartitionError",
    "TreeError",
    "EvaluationError",
    "ConfigError",
]
