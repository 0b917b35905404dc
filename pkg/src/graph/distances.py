"""
Distance and Similarity Structures.

Euclidean distances between units, the median bandwidth heuristic and
Gaussian similarity graphs.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from src.core.sample import CovariateMatrix
from src.errors import InvalidInput, NonPositiveBandwidth

# Above this many units the median heuristic runs on an evenly spaced subsample.
MEDIAN_SAMPLE_LIMIT = 1000


def _check_square(matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInput(f"{name} contains NaN or Inf")
    if not np.array_equal(matrix, matrix.T):
        raise InvalidInput(f"{name} must be symmetric")
    if np.any(np.diag(matrix) != 0):
        raise InvalidInput(f"{name} must have a zero diagonal")
    if np.any(matrix < 0):
        raise InvalidInput(f"{name} must be nonnegative")
    return matrix


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative distances with zero diagonal."""
    d: np.ndarray

    def __post_init__(self):
        d = _check_square(self.d, "Distance matrix")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def off_diagonal(self) -> np.ndarray:
        """Upper-triangle values, row-major (i < j)."""
        return self.d[np.triu_indices(self.n, k=1)]


@dataclass(frozen=True)
class SimilarityGraph:
    """
    Weighted undirected graph over n units.

    Attributes:
        weights: Symmetric nonnegative n x n matrix, zero diagonal
        mask: Adjacency of an edge-list graph; None means every pair is an edge
        distances: Distances the weights were derived from, if known
        bandwidth: Gaussian bandwidth the weights were derived with, if known
    """
    weights: np.ndarray
    mask: Optional[np.ndarray] = None
    distances: Optional[np.ndarray] = None
    bandwidth: Optional[float] = None

    def __post_init__(self):
        weights = _check_square(self.weights, "Similarity matrix").copy()
        if self.mask is not None:
            mask = np.asarray(self.mask, dtype=bool).copy()
            if mask.shape != weights.shape or not np.array_equal(mask, mask.T):
                raise InvalidInput("Edge mask must be symmetric with the weights' shape")
            np.fill_diagonal(mask, False)
            weights[~mask] = 0.0
            mask.setflags(write=False)
            object.__setattr__(self, "mask", mask)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Sequence[Tuple[int, int]],
        weights: Sequence[float]
    ) -> "SimilarityGraph":
        """Build a sparse graph from an edge list."""
        matrix = np.zeros((n, n))
        mask = np.zeros((n, n), dtype=bool)
        for (i, j), w in zip(edges, weights):
            if i == j:
                raise InvalidInput(f"Self-loop on node {i}")
            matrix[i, j] = matrix[j, i] = w
            mask[i, j] = mask[j, i] = True
        return cls(matrix, mask=mask)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def is_dense(self) -> bool:
        return self.mask is None

    def adjacency(self) -> np.ndarray:
        """Boolean edge indicator (off-diagonal)."""
        if self.mask is not None:
            return np.array(self.mask)
        adj = np.ones((self.n, self.n), dtype=bool)
        np.fill_diagonal(adj, False)
        return adj

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return self.mask is None or bool(self.mask[i, j])

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)


def pairwise_distances(X: CovariateMatrix) -> DistanceMatrix:
    """Euclidean distance between every pair of rows."""
    return DistanceMatrix(squareform(pdist(X.values, metric="euclidean")))


def _median_of(values: np.ndarray) -> float:
    if values.size == 0:
        return 1.0
    median = float(np.median(values))
    if median > 0:
        return median
    positive = values[values > 0]
    if positive.size:
        return float(positive.min())
    return 1.0


def median_bandwidth(d: DistanceMatrix) -> float:
    """
    Median of the off-diagonal distances.

    Falls back to the smallest positive distance when the median is 0,
    and to 1 when all distances are 0.
    """
    return _median_of(d.off_diagonal())


def median_bandwidth_points(X: CovariateMatrix, limit: int = MEDIAN_SAMPLE_LIMIT) -> float:
    """Median heuristic straight from covariates, subsampling evenly spaced units above `limit`."""
    values = X.values
    if X.n > limit:
        rows = np.unique(np.linspace(0, X.n - 1, limit).astype(int))
        values = values[rows]
    return _median_of(pdist(values, metric="euclidean"))


def _check_bandwidth(h: float) -> float:
    h = float(h)
    if not np.isfinite(h) or h <= 0:
        raise NonPositiveBandwidth(f"Bandwidth must be positive, got {h}")
    return h


def gaussian_kernel(distances: np.ndarray, h: float) -> np.ndarray:
    """exp(-d^2 / (2 h^2)) elementwise."""
    h = _check_bandwidth(h)
    return np.exp(-np.square(distances) / (2.0 * h * h))


def gaussian_log_kernel(distances: np.ndarray, h: float) -> np.ndarray:
    """Log of gaussian_kernel, finite even where the kernel underflows."""
    h = _check_bandwidth(h)
    return -np.square(distances) / (2.0 * h * h)


def gaussian_similarity(d: DistanceMatrix, h: float) -> SimilarityGraph:
    """Gaussian similarities e_ij = exp(-d_ij^2 / (2h^2)), zero diagonal."""
    weights = gaussian_kernel(d.d, h)
    np.fill_diagonal(weights, 0.0)
    return SimilarityGraph(weights, distances=d.d, bandwidth=float(h))


def gram_matrix(d: DistanceMatrix, h: float) -> np.ndarray:
    """Gaussian Gram matrix with its unit diagonal restored."""
    return gaussian_kernel(d.d, h)
