"""Error types with machine-parsable categories.

Every error raised by the library carries a short kebab-case ``category``
that the CLI prints as ``error:<category>: <detail>`` so callers can
dispatch on failures without parsing prose.
"""

from __future__ import annotations


class HurstLabError(Exception):
    """Base class for all library errors."""

    category = "error"

    def __init__(self, message: str, *, category: str | None = None):
        super().__init__(message)
        if category is not None:
            self.category = category


class InvalidParameterError(HurstLabError):
    category = "invalid-parameter"


class TransformError(HurstLabError):
    """Raised for transform preconditions (depth, length, dyadicity)."""


class DegenerateLevelError(HurstLabError):
    """A coefficient level unusable for log statistics (zeros dominate)."""

    category = "all-zero-level"


class PairSamplingError(HurstLabError):
    category = "no-admissible-pair"


class RegressionError(HurstLabError):
    category = "non-consecutive-levels"


class LevelRangeError(HurstLabError):
    category = "range-invalid"


class SignalIOError(HurstLabError):
    category = "io-error"


class ExperimentError(HurstLabError):
    category = "experiment-failed"


class DiagnosticsError(HurstLabError):
    category = "too-few-estimates"
