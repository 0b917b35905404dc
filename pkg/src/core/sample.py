"""
Sample Data Structures.

Covariates, outcomes and treatment assignments shared by every module.
Arrays are copied on construction and frozen, so instances are safe to share.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.errors import EmptyArm, InvalidInput, LengthMismatch


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CovariateMatrix:
    """
    Pre-treatment covariates, one row per unit.

    Attributes:
        values: Real matrix of shape (n, D)
    """
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2:
            raise InvalidInput(f"Covariates must be a 2-D matrix, got {values.ndim} dimensions")
        if values.shape[0] < 2 or values.shape[1] < 1:
            raise InvalidInput(f"Covariates need n >= 2 and D >= 1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("Covariates contain NaN or Inf")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def n(self) -> int:
        """Number of units."""
        return self.values.shape[0]

    @property
    def D(self) -> int:
        """Number of covariates."""
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class OutcomeVector:
    """Observed (or potential) outcomes, one per unit."""
    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).ravel()
        if not np.all(np.isfinite(y)):
            raise InvalidInput("Outcomes contain NaN or Inf")
        object.__setattr__(self, "y", _frozen(y))

    @property
    def n(self) -> int:
        return self.y.shape[0]

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class Assignment:
    """
    Binary treatment assignment.

    Attributes:
        a: Vector over {0, 1}; 1 = treated
    """
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a)
        if a.ndim != 1:
            raise InvalidInput("Assignment must be a vector")
        if not np.all((a == 0) | (a == 1)):
            raise InvalidInput("Assignment entries must be 0 or 1")
        object.__setattr__(self, "a", _frozen(a.astype(np.int8)))

    @classmethod
    def from_signs(cls, u: np.ndarray) -> "Assignment":
        """Build from a {-1, 1} vector."""
        u = np.asarray(u)
        if not np.all((u == -1) | (u == 1)):
            raise InvalidInput("Sign vector entries must be -1 or 1")
        return cls((u + 1) // 2)

    @property
    def u(self) -> np.ndarray:
        """Sign encoding u = 2a - 1."""
        return 2 * self.a.astype(np.int64) - 1

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def treated(self) -> np.ndarray:
        return self.a == 1

    @property
    def control(self) -> np.ndarray:
        return self.a == 0

    @property
    def group_sizes(self) -> Tuple[int, int]:
        """(n_treated, n_control)."""
        n1 = int(self.a.sum())
        return n1, self.n - n1

    def flipped(self) -> "Assignment":
        """Swap the two arms."""
        return Assignment(1 - self.a)

    def require_both_arms(self) -> None:
        n1, n0 = self.group_sizes
        if n1 == 0 or n0 == 0:
            raise EmptyArm(f"Both arms must be non-empty, got group sizes ({n1}, {n0})")

    def __len__(self) -> int:
        return self.n


def check_lengths(*sized) -> int:
    """Return the common length of the arguments or raise LengthMismatch."""
    lengths = {len(s) for s in sized}
    if len(lengths) != 1:
        raise LengthMismatch(f"Inputs have mismatched lengths: {[len(s) for s in sized]}")
    return lengths.pop()
