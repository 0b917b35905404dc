"""
Error Bounds.

- pointwise_error_bound: bias plus noise bound of one imputed counterfactual
- cut_error_bound: the assignment-dependent part of the integrated
  imputation error, which shrinks as the cut weight grows
- imputation_error: both sides of that integrated inequality
"""

import math
from dataclasses import dataclass

import numpy as np

from src.core.sample import Assignment, OutcomeVector, check_lengths
from src.errors import InvalidInput, IsolatedUnit, ZeroDegreeNode
from src.graph.distances import SimilarityGraph
from src.graph.laplacian import cut_weight


@dataclass(frozen=True)
class BoundInputs:
    """
    Smoothness and noise assumptions.

    Attributes:
        L: Lipschitz constant of the outcome functions
        b: Bound on the noise magnitude
        delta: Failure probability of the noise bound, in (0, 1)
    """
    L: float
    b: float
    delta: float

    def __post_init__(self):
        if self.L < 0 or self.b < 0:
            raise InvalidInput(f"L and b must be nonnegative, got L={self.L}, b={self.b}")
        if not 0 < self.delta < 1:
            raise InvalidInput(f"delta must lie in (0, 1), got {self.delta}")

    @property
    def C(self) -> float:
        """b * sqrt(2 log(2 / delta))."""
        return self.b * math.sqrt(2.0 * math.log(2.0 / self.delta))


def pointwise_error_bound(w: np.ndarray, dists: np.ndarray, inputs: BoundInputs) -> float:
    """
    C * ||w||_2 + L * sum_i w_i d_i.

    Args:
        w: Normalized weights of one unit's neighbours
        dists: Distances to those neighbours
        inputs: L, b and delta

    Returns:
        Bound on the imputation error of the unit
    """
    w = np.asarray(w, dtype=float)
    dists = np.asarray(dists, dtype=float)
    if w.shape != dists.shape:
        raise InvalidInput("Weights and distances must align")
    return float(inputs.C * np.linalg.norm(w) + inputs.L * np.dot(w, dists))


def _min_degree(e: SimilarityGraph) -> float:
    degrees = e.degrees()
    lowest = int(np.argmin(degrees))
    if degrees[lowest] <= 0:
        raise ZeroDegreeNode(lowest)
    return float(degrees[lowest])


def cut_error_bound(e: SimilarityGraph, a: Assignment) -> float:
    """
    (e_sum - cut) / d_min with e_sum and the cut both over ordered pairs.

    Raises:
        ZeroDegreeNode: Some unit has no similarity to any other
    """
    d_min = _min_degree(e)
    e_sum = float(np.asarray(e.weights).sum())
    return max(e_sum - 2.0 * cut_weight(e, a), 0.0) / d_min


@dataclass(frozen=True)
class ImputationError:
    """
    Sides of the integrated imputation inequality lhs <= residual + bound.

    Attributes:
        lhs: sum_i |cut-neighbour imputation of y_i - y_i|
        residual: sum_i |y_i - full-neighbourhood smoothing of y_i|
        bound: cut_error_bound of the assignment
    """
    lhs: float
    residual: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.residual + self.bound + 1e-9 * max(1.0, self.lhs)


def imputation_error(e: SimilarityGraph, a: Assignment, y: OutcomeVector) -> ImputationError:
    """
    Evaluate both sides of the cut imputation inequality.

    The inequality is guaranteed for outcomes in [0, 1].

    Raises:
        ZeroDegreeNode: Some unit has no similarity to any other
        IsolatedUnit: A unit has no similarity to the opposite arm
    """
    check_lengths(y, a)
    bound = cut_error_bound(e, a)
    W = np.asarray(e.weights)
    crossing = a.a[:, None] != a.a[None, :]
    cut_w = np.where(crossing, W, 0.0)
    cut_degree = cut_w.sum(axis=1)
    isolated = np.flatnonzero(cut_degree <= 0)
    if isolated.size:
        raise IsolatedUnit(int(isolated[0]))

    imputed = cut_w @ y.y / cut_degree
    smoothed = W @ y.y / W.sum(axis=1)
    return ImputationError(
        lhs=float(np.abs(imputed - y.y).sum()),
        residual=float(np.abs(y.y - smoothed).sum()),
        bound=bound,
    )
