"""
Individual Treatment Effect Estimators.

The design estimator imputes each unit's counterfactual as the weighted
mean outcome of its opposite-arm neighbours in the design's support graph:

    tau_i = (2 a_i - 1) (y_i - sum_j w_ij y_j)

with w_ij proportional to e_ij over cut edges only. The k-NN T-learner is
the covariate-only alternative.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.spatial import cKDTree

from src.core.sample import Assignment, CovariateMatrix, OutcomeVector, check_lengths
from src.designs.design import Design
from src.errors import ArmTooSmall, InvalidInput, IsolatedUnit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightRow:
    """Normalized imputation weights of one unit over its opposite-arm neighbours."""
    unit: int
    neighbors: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class CutWeights:
    """
    Imputation weights of every unit, stored as directed (unit, neighbour) entries.

    Attributes:
        n: Number of units
        source: Unit of each entry
        target: Opposite-arm neighbour of each entry
        weights: Normalized weight of each entry; rows sum to 1
    """
    n: int
    source: np.ndarray
    target: np.ndarray
    weights: np.ndarray

    def row(self, i: int) -> WeightRow:
        mask = self.source == i
        return WeightRow(unit=int(i), neighbors=self.target[mask], weights=self.weights[mask])

    def rows(self) -> List[WeightRow]:
        return [self.row(i) for i in range(self.n)]

    def impute(self, values: np.ndarray) -> np.ndarray:
        """sum_j w_ij values_j for every unit."""
        return np.bincount(self.source, weights=self.weights * values[self.target], minlength=self.n)


def cut_edge_weights(design: Design) -> CutWeights:
    """
    Normalize support-graph similarities over each unit's cut edges.

    Normalization runs on log-weights, so rows stay exact when the raw
    similarities underflow. A row whose log-weights are all -inf gets equal
    weights over its cut edges.

    Raises:
        IsolatedUnit: A unit has no opposite-arm neighbour
    """
    n = design.n
    cut = design.cut_mask()
    i, j = design.edges[cut, 0], design.edges[cut, 1]
    source = np.concatenate([i, j])
    target = np.concatenate([j, i])
    log_w = np.tile(design.log_weights[cut], 2)

    counts = np.bincount(source, minlength=n)
    isolated = np.flatnonzero(counts == 0)
    if isolated.size:
        raise IsolatedUnit(int(isolated[0]))

    row_max = np.full(n, -np.inf)
    np.maximum.at(row_max, source, log_w)
    degenerate = np.isneginf(row_max[source])
    shifted = np.where(degenerate, 0.0, log_w - np.where(degenerate, 0.0, row_max[source]))
    raw = np.exp(shifted)
    totals = np.bincount(source, weights=raw, minlength=n)
    return CutWeights(n=n, source=source, target=target, weights=raw / totals[source])


def design_ite(design: Design, y: OutcomeVector) -> np.ndarray:
    """
    Cut-edge ITE estimate for every unit.

    Args:
        design: Design with a support graph
        y: Observed outcomes

    Returns:
        tau_hat vector

    Raises:
        IsolatedUnit: A unit has no opposite-arm neighbour
    """
    check_lengths(y, design.assignment)
    weights = cut_edge_weights(design)
    counterfactual = weights.impute(y.y)
    return design.assignment.u * (y.y - counterfactual)


def design_ate(design: Design, y: OutcomeVector) -> float:
    """Mean of design_ite."""
    return float(np.mean(design_ite(design, y)))


def knn_t_learner(
    X: CovariateMatrix,
    y: OutcomeVector,
    a: Assignment,
    k: int = 5
) -> np.ndarray:
    """
    k-nearest-neighbour T-learner.

    Each arm's regression at x_i is the mean outcome of the k nearest units
    of that arm; for the arm a unit was observed in, its own outcome is used.

    Args:
        X: Covariates
        y: Observed outcomes
        a: Assignment
        k: Neighbours per arm

    Returns:
        tau_hat vector

    Raises:
        ArmTooSmall: An arm has fewer than k units
    """
    check_lengths(X, y, a)
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    n1, n0 = a.group_sizes
    if min(n1, n0) < k:
        raise ArmTooSmall(f"Each arm needs at least k={k} units, got group sizes ({n1}, {n0})")

    predictions = {}
    for arm, mask in ((1, a.treated), (0, a.control)):
        members = np.flatnonzero(mask)
        _, idx = cKDTree(X.values[members]).query(X.values, k=k)
        idx = np.reshape(idx, (X.n, k))
        fitted = y.y[members][idx].mean(axis=1)
        predictions[arm] = np.where(mask, y.y, fitted)
    return predictions[1] - predictions[0]
