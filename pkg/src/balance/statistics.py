"""
Balance Statistics.

Measures of how similar the treated and control covariate distributions are:

- friedman_rafsky: share of pooled-sample spanning-tree edges that cross arms
- mahalanobis_balance: Mahalanobis distance between the arm means
- standardized_mean_diff: per-covariate mean difference in pooled-sd units
- kernel_imbalance: (4/N^2) u'Ku for a Gram matrix K
"""

import logging
from typing import Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from src.core.dataset import standardize as standardize_covariates
from src.core.sample import Assignment, CovariateMatrix, check_lengths
from src.errors import InvalidInput
from src.graph.distances import SimilarityGraph
from src.graph.spanning_tree import euclidean_spanning_tree

logger = logging.getLogger(__name__)

# Ridge kicks in when the covariance condition number exceeds 1 / RIDGE_TRIGGER.
RIDGE_TRIGGER = 1e-12
RIDGE_SCALE = 1e-8


def _arm_means(values: np.ndarray, a: Assignment):
    treated = a.treated
    return values[treated].mean(axis=0), values[~treated].mean(axis=0)


def friedman_rafsky(X: CovariateMatrix, a: Assignment, standardize: bool = True) -> float:
    """
    Friedman-Rafsky statistic: crossing edges of the pooled MST over N - 1.

    The tree is the same deterministic Euclidean spanning tree the SoftBlock
    design builds, so a SoftBlock assignment scores exactly 1 on its own data.

    Args:
        X: Covariates of both arms
        a: Assignment
        standardize: Standardize X before building the tree (match the design)

    Returns:
        Value in (0, 1]; larger means better mixed arms

    Raises:
        EmptyArm: One arm is empty
    """
    check_lengths(X, a)
    a.require_both_arms()
    if standardize:
        X = standardize_covariates(X)
    tree = euclidean_spanning_tree(X)
    crossing = a.a[tree.edges[:, 0]] != a.a[tree.edges[:, 1]]
    return float(crossing.sum()) / (X.n - 1)


class MahalanobisBalance:
    """
    Mahalanobis balance with the pooled covariance factored once.

    Rerandomization evaluates thousands of assignments on the same
    covariates, so the Cholesky factor is computed up front.
    """

    def __init__(self, X: CovariateMatrix):
        self.values = X.values
        cov = np.atleast_2d(np.cov(self.values, rowvar=False, ddof=1))
        eigenvalues = np.linalg.eigvalsh(cov)
        self.ridge = 0.0
        if eigenvalues.min() <= RIDGE_TRIGGER * max(eigenvalues.max(), 0.0):
            self.ridge = RIDGE_SCALE * float(np.trace(cov)) / X.D
            if self.ridge <= 0:
                self.ridge = RIDGE_SCALE
            logger.warning("Covariance is singular; adding ridge %.3g", self.ridge)
            cov = cov + self.ridge * np.eye(X.D)
        self._factor = cho_factor(cov, lower=True)

    def __call__(self, a: Assignment) -> float:
        check_lengths(self.values, a)
        a.require_both_arms()
        mean1, mean0 = _arm_means(self.values, a)
        diff = mean1 - mean0
        return float(max(diff @ cho_solve(self._factor, diff), 0.0))


def mahalanobis_balance(X: CovariateMatrix, a: Assignment) -> float:
    """
    (x1 - x0)' S^-1 (x1 - x0) with S the pooled-sample covariance.

    Raises:
        EmptyArm: One arm is empty
    """
    check_lengths(X, a)
    a.require_both_arms()
    return MahalanobisBalance(X)(a)


def standardized_mean_diff(X: CovariateMatrix, a: Assignment) -> np.ndarray:
    """
    Per-covariate (x1 - x0) / sqrt((s1^2 + s0^2) / 2), 0 where that sd is 0.

    Raises:
        EmptyArm: One arm is empty
    """
    check_lengths(X, a)
    a.require_both_arms()
    treated = a.treated
    groups = [X.values[treated], X.values[~treated]]
    variances = [g.var(axis=0, ddof=1) if len(g) > 1 else np.zeros(X.D) for g in groups]
    sd = np.sqrt((variances[0] + variances[1]) / 2.0)
    diff = groups[0].mean(axis=0) - groups[1].mean(axis=0)
    smd = np.zeros(X.D)
    np.divide(diff, sd, out=smd, where=sd > 0)
    return smd


def kernel_imbalance(K: Union[np.ndarray, SimilarityGraph], a: Assignment) -> float:
    """
    Kernel imbalance (4/N^2) u'Ku with u = 2a - 1.

    Args:
        K: Gram matrix with its diagonal (a SimilarityGraph counts as a
            zero-diagonal matrix)
        a: Assignment

    Returns:
        Imbalance value
    """
    matrix = np.asarray(K.weights if isinstance(K, SimilarityGraph) else K, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInput(f"Gram matrix must be square, got shape {matrix.shape}")
    check_lengths(matrix, a)
    u = a.u.astype(float)
    n = a.n
    return float(4.0 / (n * n) * (u @ matrix @ u))
