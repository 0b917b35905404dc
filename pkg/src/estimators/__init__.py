"""
Estimators Module.

ATE and ITE estimators for a realised design, plus the imputation error
bounds.
"""

from src.estimators.types import EstimatorType
from src.estimators.ate import (
    LinResult,
    diff_in_means,
    lin_adjusted_ate,
    matched_pair_ate,
    pair_ite,
)
from src.estimators.ite import (
    CutWeights,
    WeightRow,
    cut_edge_weights,
    design_ate,
    design_ite,
    knn_t_learner,
)
from src.estimators.bounds import (
    BoundInputs,
    ImputationError,
    cut_error_bound,
    imputation_error,
    pointwise_error_bound,
)
from src.estimators.effects import Effects, estimate_effects, save_effects, write_ite

__all__ = [
    "EstimatorType",
    "LinResult",
    "diff_in_means",
    "lin_adjusted_ate",
    "matched_pair_ate",
    "pair_ite",
    "CutWeights",
    "WeightRow",
    "cut_edge_weights",
    "design_ate",
    "design_ite",
    "knn_t_learner",
    "BoundInputs",
    "ImputationError",
    "cut_error_bound",
    "imputation_error",
    "pointwise_error_bound",
    "Effects",
    "estimate_effects",
    "save_effects",
    "write_ite",
]
