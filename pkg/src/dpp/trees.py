"""
Spanning-Tree Distribution.

Trees drawn with probability proportional to exp(sum of their edge
similarities). The normalizer is the weighted matrix-tree determinant,
computed in log space after shifting every similarity by the largest one:

    log Z = logdet(reduced Laplacian of exp(e - c)) + (n - 1) c

The maximum spanning tree is the mode of this distribution.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.sample import CovariateMatrix
from src.designs.design import Design
from src.errors import DisconnectedGraph, EdgeNotInGraph, LengthMismatch, TooLarge
from src.graph.distances import SimilarityGraph, gaussian_similarity, pairwise_distances
from src.graph.spanning_tree import SpanningTree

logger = logging.getLogger(__name__)

MAX_ENUMERATION_NODES = 8


@dataclass(frozen=True)
class TreeDistribution:
    """
    Normalized spanning-tree distribution of a similarity graph.

    Attributes:
        scaled_weights: exp(e_ij - shift) on edges, 0 elsewhere
        shift: Largest edge similarity, removed before exponentiating
        log_partition: log of the sum over spanning trees of exp(tree weight)
    """
    scaled_weights: np.ndarray
    shift: float
    log_partition: float

    @property
    def exp_weights(self) -> np.ndarray:
        """exp(e_ij) on edges; may overflow for large similarities."""
        with np.errstate(over="ignore"):
            return self.scaled_weights * np.exp(self.shift)


def tree_distribution(e: SimilarityGraph) -> TreeDistribution:
    """
    Build the distribution and its normalizer.

    Raises:
        DisconnectedGraph: The graph has no spanning tree
    """
    n = e.n
    adjacency = e.adjacency()
    weights = np.asarray(e.weights)
    if n == 1:
        return TreeDistribution(np.zeros((1, 1)), 0.0, 0.0)
    if not adjacency.any():
        raise DisconnectedGraph(f"Graph on {n} nodes has no edges")

    shift = float(weights[adjacency].max())
    scaled = np.where(adjacency, np.exp(weights - shift), 0.0)
    laplacian = np.diag(scaled.sum(axis=1)) - scaled
    sign, logdet = np.linalg.slogdet(laplacian[1:, 1:])
    if sign <= 0 or not np.isfinite(logdet):
        raise DisconnectedGraph("Reduced Laplacian is singular: the graph is disconnected")
    return TreeDistribution(scaled, shift, float(logdet + (n - 1) * shift))


def log_partition(e: SimilarityGraph) -> float:
    """Log of the sum over all spanning trees of exp(sum of tree edge similarities)."""
    return tree_distribution(e).log_partition


def tree_log_weight(t: SpanningTree, e: SimilarityGraph) -> float:
    """
    Sum of the graph similarities over the tree's edges.

    Raises:
        EdgeNotInGraph: A tree edge is absent from the graph
    """
    if t.n != e.n:
        raise LengthMismatch(f"Tree has {t.n} nodes, graph has {e.n}")
    for i, j in t.edges:
        if not e.has_edge(int(i), int(j)):
            raise EdgeNotInGraph((int(i), int(j)))
    weights = np.asarray(e.weights)
    return float(weights[t.edges[:, 0], t.edges[:, 1]].sum())


def tree_log_probability(t: SpanningTree, e: SimilarityGraph) -> float:
    """log p(T) = tree_log_weight - log_partition; never above 0."""
    return min(tree_log_weight(t, e) - log_partition(e), 0.0)


def _decode_pruefer(sequence, n: int) -> np.ndarray:
    degree = [1] * n
    for v in sequence:
        degree[v] += 1
    edges = []
    for v in sequence:
        leaf = degree.index(1)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [i for i in range(n) if degree[i] == 1]
    edges.append((u, w))
    return np.asarray(edges, dtype=np.int64)


def enumerate_spanning_trees(e: SimilarityGraph) -> List[SpanningTree]:
    """
    Every labeled spanning tree of a small graph, via Pruefer sequences.

    Raises:
        TooLarge: More than MAX_ENUMERATION_NODES nodes
    """
    n = e.n
    if n > MAX_ENUMERATION_NODES:
        raise TooLarge(f"Enumeration is limited to {MAX_ENUMERATION_NODES} nodes, got {n}")
    if n == 1:
        return [SpanningTree(1, np.empty((0, 2), dtype=np.int64), np.empty(0))]

    adjacency = e.adjacency()
    weights = np.asarray(e.weights)
    trees = []
    for sequence in itertools.product(range(n), repeat=n - 2):
        edges = _decode_pruefer(sequence, n)
        if adjacency[edges[:, 0], edges[:, 1]].all():
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            trees.append(SpanningTree(n, edges, weights[edges[:, 0], edges[:, 1]]))
    logger.debug("Enumerated %d spanning trees on %d nodes", len(trees), n)
    return trees


def support_tree_log_probability(X: CovariateMatrix, design: Design) -> float:
    """
    Log-probability of a design's spanning tree under the Gaussian similarity graph.

    Args:
        X: The covariates the design was built on (after standardization)
        design: Design whose support graph is a spanning tree

    Returns:
        log p(T)
    """
    e = gaussian_similarity(pairwise_distances(X), design.bandwidth)
    tree = SpanningTree(design.n, design.edges, design.weights)
    return tree_log_probability(tree, e)
