"""
DPP Module.

Spanning trees as draws from an exponentiated-weight distribution whose
mode is the maximum spanning tree.
"""

from src.dpp.trees import (
    TreeDistribution,
    enumerate_spanning_trees,
    log_partition,
    support_tree_log_probability,
    tree_distribution,
    tree_log_probability,
    tree_log_weight,
)

__all__ = [
    "TreeDistribution",
    "enumerate_spanning_trees",
    "log_partition",
    "support_tree_log_probability",
    "tree_distribution",
    "tree_log_probability",
    "tree_log_weight",
]
