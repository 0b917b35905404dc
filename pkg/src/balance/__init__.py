"""
Balance Module.

Covariate balance statistics for an assignment.
"""

from src.balance.statistics import (
    MahalanobisBalance,
    friedman_rafsky,
    kernel_imbalance,
    mahalanobis_balance,
    standardized_mean_diff,
)
from src.balance.report import BalanceReport, balance_report

__all__ = [
    "MahalanobisBalance",
    "friedman_rafsky",
    "kernel_imbalance",
    "mahalanobis_balance",
    "standardized_mean_diff",
    "BalanceReport",
    "balance_report",
]
