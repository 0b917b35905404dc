"""
Tree Designs - Exact Maxcut on Forests.

Trees are bipartite, so alternating arms along every edge cuts all of them,
which is the maximum cut. Two designs build on this:

- SoftBlock: Maxcut of the maximum spanning tree of Gaussian similarities
- GreedyNeighbors: Maxcut of the 1-nearest-neighbour forest, one independent
  coin per component (2^M realizable assignments for M components)
"""

import logging
from typing import Tuple, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from src.core.sample import Assignment, CovariateMatrix
from src.core.seeds import DEFAULT_SEED, make_rng
from src.designs.base import Bandwidth, BaseDesign, DesignConfig
from src.designs.design import Design
from src.designs.types import DesignMethod
from src.graph.distances import gaussian_log_kernel
from src.graph.neighbors import nearest_neighbor_forest
from src.graph.spanning_tree import (
    connected_components,
    edge_distances,
    euclidean_spanning_tree,
    require_forest,
)

logger = logging.getLogger(__name__)


def tree_coloring(n: int, edges: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two-color a forest by breadth-first search from each component's lowest node.

    Returns:
        (parity, labels): depth parity of every node and its component label

    Raises:
        CycleDetected: The edges do not form a forest
    """
    edges = require_forest(n, edges)
    both = np.vstack([edges, edges[:, ::-1]])
    adjacency = csr_matrix((np.ones(len(both)), (both[:, 0], both[:, 1])), shape=(n, n))
    _, labels = connected_components(n, edges)
    _, roots = np.unique(labels, return_index=True)

    parity = np.zeros(n, dtype=np.int8)
    for root in roots:
        order, predecessors = breadth_first_order(
            adjacency, int(root), directed=False, return_predecessors=True
        )
        # BFS order visits every parent before its children
        for v in order[1:]:
            parity[v] = 1 - parity[predecessors[v]]
    return parity, labels


def two_color_tree(
    t,
    seed: Union[int, np.random.Generator] = DEFAULT_SEED,
    randomize_flip: bool = True
) -> Assignment:
    """
    Maxcut of a tree or forest: adjacent nodes always land in opposite arms.

    Args:
        t: SpanningTree, NearestNeighborForest or anything with n and edges
        seed: Seed (or generator) for the per-component flips
        randomize_flip: Flip each component by fair coin; otherwise every
            component's lowest-index node is treated

    Returns:
        Assignment cutting every edge

    Raises:
        CycleDetected: Input is not a forest
    """
    parity, labels = tree_coloring(t.n, t.edges)
    n_components = int(labels.max()) + 1
    if randomize_flip:
        flips = make_rng(seed).integers(0, 2, size=n_components)
    else:
        flips = np.zeros(n_components, dtype=np.int64)
    a = 1 - (parity ^ flips[labels])
    return Assignment(a)


class SoftBlockDesign(BaseDesign):
    """
    SoftBlock: Maxcut on the maximum spanning tree of the similarity graph.

    The tree is computed from distances directly (the Gaussian similarity is a
    decreasing function of distance), so it does not depend on the bandwidth.
    Only two assignments are realizable: the coloring and its global flip.
    """

    method = DesignMethod.SOFTBLOCK

    def build(self, X: CovariateMatrix, seed: int) -> Design:
        h = self.resolve_bandwidth(X)
        tree = euclidean_spanning_tree(X)
        assignment = two_color_tree(tree, seed, self.config.randomize_flip)
        return Design(
            assignment=assignment,
            method=self.method,
            seed=seed,
            edges=tree.edges,
            log_weights=gaussian_log_kernel(tree.weights, h),
            edge_lengths=tree.weights,
            bandwidth=h,
            component_ids=np.zeros(X.n, dtype=np.int64),
        )


class GreedyNeighborsDesign(BaseDesign):
    """
    GreedyNeighbors: Maxcut on the 1-nearest-neighbour forest.

    Every unit's nearest neighbour ends up in the opposite arm; a unit may be
    the nearest neighbour of several others.
    """

    method = DesignMethod.GREEDY_NEIGHBORS

    def build(self, X: CovariateMatrix, seed: int) -> Design:
        h = self.resolve_bandwidth(X)
        forest = nearest_neighbor_forest(X)
        assignment = two_color_tree(forest, seed, randomize_flip=True)
        lengths = edge_distances(X, forest.edges)
        logger.debug("GreedyNeighbors: %d components", forest.n_components)
        return Design(
            assignment=assignment,
            method=self.method,
            seed=seed,
            edges=forest.edges,
            log_weights=gaussian_log_kernel(lengths, h),
            edge_lengths=lengths,
            bandwidth=h,
            component_ids=forest.components,
        )


def softblock(
    X: CovariateMatrix,
    h: Bandwidth = "auto",
    seed: int = DEFAULT_SEED,
    standardize: bool = True,
    randomize_flip: bool = True
) -> Design:
    """Functional form of SoftBlockDesign."""
    config = DesignConfig(bandwidth=h, standardize=standardize, randomize_flip=randomize_flip)
    return SoftBlockDesign(config).design(X, seed)


def greedy_neighbors(
    X: CovariateMatrix,
    seed: int = DEFAULT_SEED,
    h: Bandwidth = "auto",
    standardize: bool = True
) -> Design:
    """Functional form of GreedyNeighborsDesign."""
    config = DesignConfig(bandwidth=h, standardize=standardize)
    return GreedyNeighborsDesign(config).design(X, seed)
