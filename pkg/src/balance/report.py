"""Balance report: every balance statistic for one assignment."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from src.balance.statistics import (
    friedman_rafsky,
    kernel_imbalance,
    mahalanobis_balance,
    standardized_mean_diff,
)
from src.core.dataset import standardize as standardize_covariates
from src.core.sample import Assignment, CovariateMatrix, check_lengths
from src.graph.distances import gram_matrix, median_bandwidth_points, pairwise_distances


@dataclass(frozen=True)
class BalanceReport:
    """
    Balance of an assignment on its covariates.

    Attributes:
        friedman_rafsky: Share of pooled MST edges crossing arms, in (0, 1]
        mahalanobis: Mahalanobis distance between arm means
        smd: Standardized mean difference per covariate
        kernel_imbalance: (4/N^2) u'Ku under the Gaussian Gram matrix
        group_sizes: (n_treated, n_control)
        bandwidth: Bandwidth of the Gram matrix
    """
    friedman_rafsky: float
    mahalanobis: float
    smd: np.ndarray
    kernel_imbalance: float
    group_sizes: Tuple[int, int]
    bandwidth: float

    def to_dict(self) -> dict:
        return {
            "friedman_rafsky": float(self.friedman_rafsky),
            "mahalanobis": float(self.mahalanobis),
            "smd": [float(v) for v in self.smd],
            "kernel_imbalance": float(self.kernel_imbalance),
            "group_sizes": [int(v) for v in self.group_sizes],
            "bandwidth": float(self.bandwidth),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")


def balance_report(
    X: CovariateMatrix,
    a: Assignment,
    bandwidth: Optional[float] = None,
    standardize: bool = True
) -> BalanceReport:
    """
    Compute every balance statistic.

    Args:
        X: Covariates
        a: Assignment
        bandwidth: Gram-matrix bandwidth (median heuristic when None)
        standardize: Standardize X first, as the designs do

    Returns:
        BalanceReport

    Raises:
        EmptyArm: One arm is empty
    """
    check_lengths(X, a)
    a.require_both_arms()
    Xs = standardize_covariates(X) if standardize else X
    h = median_bandwidth_points(Xs) if bandwidth is None else float(bandwidth)
    K = gram_matrix(pairwise_distances(Xs), h)
    return BalanceReport(
        friedman_rafsky=friedman_rafsky(Xs, a, standardize=False),
        mahalanobis=mahalanobis_balance(X, a),
        smd=standardized_mean_diff(X, a),
        kernel_imbalance=kernel_imbalance(K, a),
        group_sizes=a.group_sizes,
        bandwidth=h,
    )
