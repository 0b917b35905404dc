"""
Exception hierarchy.

Every error raised on purpose by the package derives from ``DesignError``,
itself a ``ValueError``, so callers can catch either.
"""

from typing import Optional, Tuple


class DesignError(ValueError):
    """Base class for all package errors."""


class InvalidInput(DesignError):
    """Input array has the wrong shape or contains NaN/Inf."""


class MissingFile(DesignError, FileNotFoundError):
    """Input file does not exist."""

    def __init__(self, path: str):
        super().__init__(f"File not found: {path}")
        self.path = path


class RaggedRows(DesignError):
    """A CSV row has a different number of fields than the first row."""

    def __init__(self, row: int, expected: int, found: int):
        super().__init__(f"Row {row} has {found} fields, expected {expected}")
        self.row = row


class NonNumericField(DesignError):
    """A CSV field does not parse as a finite real number."""

    def __init__(self, row: int, col: int, value: str):
        super().__init__(f"Non-numeric field at row {row}, column {col}: {value!r}")
        self.row = row
        self.col = col


class LengthMismatch(DesignError):
    """Two inputs that must describe the same units have different lengths."""


class NonPositiveBandwidth(DesignError):
    """Kernel bandwidth must be strictly positive."""


class DisconnectedGraph(DesignError):
    """Graph has more than one connected component."""


class CycleDetected(DesignError):
    """Graph expected to be a forest contains a cycle."""


class EmptyArm(DesignError):
    """One of the two arms has no units."""


class MaxDrawsExceeded(DesignError):
    """Rerandomization did not accept a draw within the draw cap."""


class RankDeficient(DesignError):
    """Regression design matrix is rank deficient even after ridge fallback."""


class IsolatedUnit(DesignError):
    """A unit has no opposite-arm neighbour in the support graph."""

    def __init__(self, unit: int):
        super().__init__(f"Unit {unit} has no opposite-arm neighbour in the support graph")
        self.unit = unit


class ArmTooSmall(DesignError):
    """An arm has fewer units than the requested number of neighbours."""


class WrongDesignKind(DesignError):
    """Estimator requires a different design method."""


class ZeroDegreeNode(DesignError):
    """A node has zero total similarity to all other nodes."""

    def __init__(self, unit: int):
        super().__init__(f"Node {unit} has zero degree")
        self.unit = unit


class EdgeNotInGraph(DesignError):
    """Tree edge is absent from the graph."""

    def __init__(self, edge: Tuple[int, int]):
        super().__init__(f"Edge {edge} is not in the graph")
        self.edge = edge


class TooLarge(DesignError):
    """Exhaustive enumeration requested on a graph that is too large."""


class UnknownDgp(DesignError):
    """Data-generating process name not recognised."""


class IncompatibleEstimator(DesignError):
    """Estimator cannot be applied to the given design method."""

    def __init__(self, method: str, estimator: str, reason: Optional[str] = None):
        message = f"Estimator '{estimator}' cannot be used with design '{method}'"
        if reason:
            message += f": {reason}"
        super().__init__(message)
        self.method = method
        self.estimator = estimator


class ConfigError(DesignError):
    """Benchmark or CLI configuration is malformed."""
