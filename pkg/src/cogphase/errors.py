"""Exception hierarchy for cogphase.

Every error raised by the library derives from :class:`CogPhaseError`, and
also from the builtin it refines so ``except ValueError`` keeps working.
"""

from typing import List, Optional


class CogPhaseError(Exception):
    """Base class for all cogphase errors."""


# =============================================================================
# Dataset / signal validation
# =============================================================================

class DatasetError(CogPhaseError, ValueError):
    """A dataset or signal breaks one of its invariants.

    Attributes:
        violations: Per-sample messages (0-based sample index prefix)
    """

    def __init__(self, message: str, violations: Optional[List[str]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class DimensionMismatchError(DatasetError):
    """Sequences that must share a length do not."""


class NonFiniteValueError(DatasetError):
    """A signal contains NaN or Inf."""


class EmptyClassError(DatasetError):
    """A class has too few samples for training or LOOCV."""


class DatasetTooSmallError(DatasetError):
    """Feature dimension is below the requested target N."""


class ConfigDimensionMismatchError(DatasetError):
    """Pipeline sieve N differs from the dataset feature dimension."""


# =============================================================================
# Parameters
# =============================================================================

class InvalidParamsError(CogPhaseError, ValueError):
    """A parameter object failed validation."""


class MOutOfRangeError(InvalidParamsError):
    """Sieve m is outside [0, N]."""


class NotConvergedError(CogPhaseError, RuntimeError):
    """SMO exhausted its pass budget (only raised when ``strict=True``)."""


class ConvergenceWarning(UserWarning):
    """SMO exhausted its pass budget; the model is returned anyway."""


# =============================================================================
# File I/O
# =============================================================================

class DataFileError(CogPhaseError, ValueError):
    """Base for dataset file problems."""


class ParseError(DataFileError):
    """A CSV cell or row could not be parsed.

    Attributes:
        row: 1-based row number in the CSV file
        column: 1-based column number (None when the whole row is at fault)
    """

    def __init__(self, message: str, row: int, column: Optional[int] = None):
        where = f"row {row}" if column is None else f"row {row}, column {column}"
        super().__init__(f"{where}: {message}")
        self.row = row
        self.column = column


class LabelOutOfRangeError(DataFileError):
    """A label other than 1 or 2 was found."""

    def __init__(self, label: str, row: int):
        super().__init__(f"row {row}: label must be 1 or 2, got {label!r}")
        self.row = row
        self.label = label


class SidecarMismatchError(DataFileError):
    """The JSON sidecar disagrees with the CSV body."""
