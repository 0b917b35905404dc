"""Core module - sample types, CSV datasets and seeds."""

from src.core.sample import Assignment, CovariateMatrix, OutcomeVector
from src.core.dataset import (
    load_assignment,
    load_covariates,
    load_outcomes,
    standardize,
    write_assignment,
    write_covariates,
    write_outcomes,
)
from src.core.seeds import DEFAULT_SEED, derive_seed, make_rng

__all__ = [
    "Assignment",
    "CovariateMatrix",
    "OutcomeVector",
    "load_assignment",
    "load_covariates",
    "load_outcomes",
    "standardize",
    "write_assignment",
    "write_covariates",
    "write_outcomes",
    "DEFAULT_SEED",
    "derive_seed",
    "make_rng",
]
