"""
Nearest Neighbours.

Exact 1-nearest-neighbour search (kd-tree in low dimension, brute force
above KDTREE_MAX_DIM) and the 1-NN forest. Ties go to the lowest index,
which makes the 1-NN graph a forest.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from src.core.sample import CovariateMatrix
from src.graph.spanning_tree import connected_components, edge_distances

logger = logging.getLogger(__name__)

KDTREE_MAX_DIM = 16
BRUTE_FORCE_CHUNK = 512


def _nearest_brute_force(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    nearest = np.empty(n, dtype=np.int64)
    for start in range(0, n, BRUTE_FORCE_CHUNK):
        stop = min(start + BRUTE_FORCE_CHUNK, n)
        block = cdist(values[start:stop], values)
        block[np.arange(stop - start), np.arange(start, stop)] = np.inf
        # argmin returns the first (lowest-index) minimum
        nearest[start:stop] = np.argmin(block, axis=1)
    return nearest


def _nearest_kdtree(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    tree = cKDTree(values)
    k = min(n, 4)
    dist, idx = tree.query(values, k=k)
    dist = np.where(idx == np.arange(n)[:, None], np.inf, dist)

    smallest = dist.min(axis=1)
    tied = dist == smallest[:, None]
    nearest = np.where(tied, idx, n).min(axis=1)

    # When the k-th returned neighbour still sits at the minimal distance,
    # further equally distant points may exist outside the k returned.
    ambiguous = np.flatnonzero(tied[:, -1] & (k < n))
    for i in ambiguous:
        radius = smallest[i] * (1 + 1e-12) + 1e-300
        ball = np.asarray(tree.query_ball_point(values[i], r=radius), dtype=np.int64)
        ball = ball[ball != i]
        diff = values[ball] - values[i]
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        nearest[i] = ball[d == d.min()].min()
    return nearest


def nearest_neighbors(X: CovariateMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nearest other unit of every unit.

    Returns:
        (indices, distances), ties resolved to the lowest index
    """
    if X.D <= KDTREE_MAX_DIM:
        nearest = _nearest_kdtree(X.values)
    else:
        nearest = _nearest_brute_force(X.values)
    distances = edge_distances(X, np.column_stack([np.arange(X.n), nearest]))
    return nearest, distances


@dataclass(frozen=True)
class NearestNeighborForest:
    """
    Undirected 1-nearest-neighbour graph.

    Attributes:
        n: Number of units
        edges: (m, 2) deduplicated edges with i < j, sorted
        nearest: Nearest neighbour of every unit
        components: Component label of every unit
    """
    n: int
    edges: np.ndarray
    nearest: np.ndarray
    components: np.ndarray

    @property
    def n_components(self) -> int:
        return int(self.components.max()) + 1 if self.n else 0

    def edge_set(self):
        return frozenset((int(i), int(j)) for i, j in self.edges)


def nearest_neighbor_forest(X: CovariateMatrix) -> NearestNeighborForest:
    """Link every unit to its nearest neighbour; mutual pairs collapse to one edge."""
    nearest, _ = nearest_neighbors(X)
    pairs = np.sort(np.column_stack([np.arange(X.n), nearest]), axis=1)
    edges = np.unique(pairs, axis=0)
    _, labels = connected_components(X.n, edges)
    logger.debug("1-NN forest: %d edges, %d components", len(edges), labels.max() + 1)
    for array in (edges, nearest, labels):
        array.setflags(write=False)
    return NearestNeighborForest(n=X.n, edges=edges, nearest=nearest, components=labels)
