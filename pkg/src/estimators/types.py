"""Estimator type enumeration."""

from enum import Enum
from typing import Optional

from src.designs.types import DesignMethod


class EstimatorType(Enum):
    """
    Treatment-effect estimators.

    - DIM: Difference in means (ATE only)
    - LIN: Regression adjustment with treatment-covariate interactions (ATE only)
    - DESIGN: Cut-edge imputation over the design's support graph
    - KNN: k-nearest-neighbour T-learner
    - PAIRS: Mean within-pair difference of a matched-pairs design
    """
    DIM = "dim"
    LIN = "lin"
    DESIGN = "design"
    KNN = "knn"
    PAIRS = "pairs"

    @classmethod
    def parse(cls, name: "str | EstimatorType") -> "EstimatorType":
        """Look up by value or member name, case-insensitively."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        for estimator in cls:
            if estimator.value == key or estimator.name.lower() == key:
                return estimator
        raise ValueError(f"Unknown estimator: {name!r}. Choose from {cls.values()}")

    @classmethod
    def values(cls) -> list:
        return [e.value for e in cls]

    def incompatibility(self, method: DesignMethod) -> Optional[str]:
        """Reason this estimator cannot run on a design method, or None."""
        if self is EstimatorType.DESIGN and not method.has_support_graph:
            return f"{method.value} designs have no support graph"
        if self is EstimatorType.PAIRS and method is not DesignMethod.MATCHED_PAIRS:
            return "the pairs estimator needs a matched-pairs design"
        return None
