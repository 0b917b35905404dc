"""
Estimator dispatch: ATE and per-unit ITE from any estimator.

ATE-only estimators report their ATE as every unit's ITE.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from src.core.dataset import standardize as standardize_covariates
from src.core.sample import CovariateMatrix, OutcomeVector
from src.designs.design import Design
from src.errors import IncompatibleEstimator
from src.estimators.ate import diff_in_means, lin_adjusted_ate, matched_pair_ate, pair_ite
from src.estimators.ite import design_ite, knn_t_learner
from src.estimators.types import EstimatorType

FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class Effects:
    """
    Estimated effects.

    Attributes:
        estimator: Estimator used
        ate: ATE estimate
        ite: Per-unit ITE estimates
        se: Standard error of the ATE, when the estimator provides one
        standardized: Covariates were standardized before neighbour search
    """
    estimator: EstimatorType
    ate: float
    ite: np.ndarray
    se: Optional[float] = None
    standardized: bool = True

    def to_dict(self) -> dict:
        return {
            "estimator": self.estimator.value,
            "ate": float(self.ate),
            "se": None if self.se is None else float(self.se),
            "n": int(len(self.ite)),
            "standardized": bool(self.standardized),
        }


def estimate_effects(
    estimator: Union[str, EstimatorType],
    design: Design,
    X: CovariateMatrix,
    y: OutcomeVector,
    k: int = 5,
    standardize: bool = True
) -> Effects:
    """
    Run one estimator on a realised design.

    Args:
        estimator: Estimator to run
        design: Design the outcomes were observed under
        X: Covariates
        y: Observed outcomes
        k: Neighbours per arm for the k-NN T-learner
        standardize: Standardize covariates before the k-NN search, as the
            designs do before theirs

    Returns:
        Effects

    Raises:
        IncompatibleEstimator: The estimator cannot use this design
    """
    estimator = EstimatorType.parse(estimator)
    reason = estimator.incompatibility(design.method)
    if reason:
        raise IncompatibleEstimator(design.method.value, estimator.value, reason)

    a = design.assignment
    if estimator is EstimatorType.DIM:
        ate = diff_in_means(y, a)
        return Effects(estimator, ate, np.full(a.n, ate), standardized=standardize)
    if estimator is EstimatorType.LIN:
        result = lin_adjusted_ate(y, a, X)
        return Effects(estimator, result.estimate, np.full(a.n, result.estimate), result.se, standardize)
    if estimator is EstimatorType.DESIGN:
        ite = design_ite(design, y)
        return Effects(estimator, float(ite.mean()), ite, standardized=standardize)
    if estimator is EstimatorType.KNN:
        if standardize:
            X = standardize_covariates(X)
        ite = knn_t_learner(X, y, a, k)
        return Effects(estimator, float(ite.mean()), ite, standardized=standardize)
    return Effects(estimator, matched_pair_ate(design, y), pair_ite(design, y), standardized=standardize)


def write_ite(ite: np.ndarray, path: Union[str, Path]) -> None:
    """Write per-unit effects as CSV with columns (unit_index, tau_hat)."""
    frame = pd.DataFrame({"unit_index": np.arange(len(ite)), "tau_hat": np.asarray(ite, dtype=float)})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def save_effects(effects: Effects, directory: Union[str, Path]) -> Dict[str, Path]:
    """
    Write ate.json and ite.csv into a directory.

    Returns:
        Mapping of artifact name to path
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {"ate": directory / "ate.json", "ite": directory / "ite.csv"}
    with open(paths["ate"], "w", encoding="utf-8") as fh:
        json.dump(effects.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_ite(effects.ite, paths["ite"])
    return paths
