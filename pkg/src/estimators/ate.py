"""
Average Treatment Effect Estimators.

- diff_in_means: mean(y | treated) - mean(y | control)
- lin_adjusted_ate: OLS of y on [1, a, Xc, a*Xc] with HC2 robust errors
- matched_pair_ate: mean within-pair difference of a matched-pairs design
"""

import logging
from dataclasses import dataclass

import numpy as np
import statsmodels.api as sm

from src.core.dataset import constant_columns
from src.core.sample import Assignment, CovariateMatrix, OutcomeVector, check_lengths
from src.designs.design import Design
from src.designs.types import DesignMethod
from src.errors import RankDeficient, WrongDesignKind

logger = logging.getLogger(__name__)

RIDGE_SCALE = 1e-8


@dataclass(frozen=True)
class LinResult:
    """Regression-adjusted ATE with its heteroskedasticity-robust standard error."""
    estimate: float
    se: float

    def __iter__(self):
        return iter((self.estimate, self.se))


def diff_in_means(y: OutcomeVector, a: Assignment) -> float:
    """
    Difference in arm means.

    Raises:
        EmptyArm: One arm is empty
    """
    check_lengths(y, a)
    a.require_both_arms()
    return float(y.y[a.treated].mean() - y.y[a.control].mean())


def _interacted_design(a: Assignment, X: CovariateMatrix) -> np.ndarray:
    varying = np.setdiff1d(np.arange(X.D), constant_columns(X))
    Xc = X.values[:, varying] - X.values[:, varying].mean(axis=0)
    arm = a.a.astype(float)[:, None]
    return np.hstack([np.ones((a.n, 1)), arm, Xc, arm * Xc])


def _ridge_sandwich(Z: np.ndarray, y: np.ndarray) -> LinResult:
    """Ridge solve with an HC0 sandwich error; the intercept is not penalized."""
    gram = Z.T @ Z
    penalty = RIDGE_SCALE * max(np.trace(gram) / Z.shape[1], 1.0) * np.eye(Z.shape[1])
    penalty[0, 0] = 0.0
    bread = np.linalg.pinv(gram + penalty)
    beta = bread @ Z.T @ y
    residual = y - Z @ beta
    meat = (Z * residual[:, None] ** 2).T @ Z
    cov = bread @ meat @ bread
    return LinResult(float(beta[1]), float(np.sqrt(max(cov[1, 1], 0.0))))


def lin_adjusted_ate(y: OutcomeVector, a: Assignment, X: CovariateMatrix) -> LinResult:
    """
    Regression-adjusted ATE with centered covariates interacted with treatment.

    Constant covariates are dropped, so irrelevant X reduces this to the
    difference in means.

    Args:
        y: Observed outcomes
        a: Assignment
        X: Covariates

    Returns:
        LinResult(estimate, se): coefficient on treatment and its HC2 error

    Raises:
        EmptyArm: One arm is empty
        RankDeficient: No finite estimate even after the ridge fallback
    """
    check_lengths(y, a, X)
    a.require_both_arms()
    Z = _interacted_design(a, X)

    if np.linalg.matrix_rank(Z) < Z.shape[1]:
        logger.warning("Lin design matrix is rank deficient; using a ridge fallback")
        result = _ridge_sandwich(Z, y.y)
    else:
        fit = sm.OLS(y.y, Z).fit().get_robustcov_results(cov_type="HC2")
        result = LinResult(float(fit.params[1]), float(fit.bse[1]))
        if not np.isfinite(result.se):
            # HC2 is undefined when a unit has leverage 1
            fit = sm.OLS(y.y, Z).fit().get_robustcov_results(cov_type="HC1")
            result = LinResult(result.estimate, float(fit.bse[1]))

    if not np.isfinite(result.estimate):
        raise RankDeficient("Regression adjustment produced a non-finite estimate")
    return result


def matched_pair_ate(design: Design, y: OutcomeVector) -> float:
    """
    Mean of (y_treated - y_control) over matched pairs; an unmatched unit is excluded.

    Raises:
        WrongDesignKind: The design is not a matched-pairs design
    """
    if design.method is not DesignMethod.MATCHED_PAIRS:
        raise WrongDesignKind(f"Pair estimator needs a matched-pairs design, got {design.method.value}")
    check_lengths(y, design.assignment)
    pairs = design.pairs()
    return float(np.mean(y.y[pairs[:, 0]] - y.y[pairs[:, 1]]))


def pair_ite(design: Design, y: OutcomeVector) -> np.ndarray:
    """
    Per-unit effects of a matched-pairs design.

    Both members of a pair get the pair difference; an unmatched unit gets
    the pair-mean ATE.
    """
    ate = matched_pair_ate(design, y)
    pairs = design.pairs()
    tau = np.full(design.n, ate)
    diff = y.y[pairs[:, 0]] - y.y[pairs[:, 1]]
    tau[pairs[:, 0]] = diff
    tau[pairs[:, 1]] = diff
    return tau
