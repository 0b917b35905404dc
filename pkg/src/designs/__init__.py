"""
Designs Module.

Treatment assignment mechanisms: SoftBlock, GreedyNeighbors, greedy matched
pairs and the Bernoulli, complete and rerandomized baselines.
"""

from src.designs.types import DesignMethod
from src.designs.design import Design
from src.designs.base import BaseDesign, DesignConfig
from src.designs.tree_designs import (
    GreedyNeighborsDesign,
    SoftBlockDesign,
    greedy_neighbors,
    softblock,
    tree_coloring,
    two_color_tree,
)
from src.designs.randomized import (
    BernoulliDesign,
    CompleteDesign,
    RerandomizeDesign,
    bernoulli,
    complete_randomization,
    rerandomize,
)
from src.designs.matching import MatchedPairsDesign, greedy_matching, matched_pairs
from src.designs.designer import ExperimentDesigner

__all__ = [
    "DesignMethod",
    "Design",
    "BaseDesign",
    "DesignConfig",
    "GreedyNeighborsDesign",
    "SoftBlockDesign",
    "greedy_neighbors",
    "softblock",
    "tree_coloring",
    "two_color_tree",
    "BernoulliDesign",
    "CompleteDesign",
    "RerandomizeDesign",
    "bernoulli",
    "complete_randomization",
    "rerandomize",
    "MatchedPairsDesign",
    "greedy_matching",
    "matched_pairs",
    "ExperimentDesigner",
]
