"""
Spanning Trees.

Dense Prim's algorithm with a total edge order (key, i, j), so every tree is
unique and deterministic. Two entry points share the same engine:

- maximum_spanning_tree: on a SimilarityGraph
- euclidean_spanning_tree: straight from covariates, one distance row per
  step (O(n^2 D) time, O(n) extra memory)
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, FrozenSet, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _csgraph_components

from src.core.sample import CovariateMatrix
from src.errors import CycleDetected, DisconnectedGraph, InvalidInput, MissingFile
from src.graph.distances import SimilarityGraph

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _normalize_edges(edges, n: int) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise InvalidInput(f"Edge endpoints must lie in 0..{n - 1}")
    if np.any(edges[:, 0] == edges[:, 1]):
        raise InvalidInput("Self-loops are not allowed")
    return np.sort(edges, axis=1)


def connected_components(n: int, edges: np.ndarray) -> Tuple[int, np.ndarray]:
    """
    Connected components of an undirected edge list.

    Returns:
        (count, labels); labels are numbered in order of each component's
        lowest node index
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    graph = coo_matrix(
        (np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n)
    )
    count, labels = _csgraph_components(graph, directed=False)
    return int(count), labels.astype(np.int64)


def is_forest(n: int, edges: np.ndarray) -> bool:
    """A graph is a forest iff |E| = n - #components (and no duplicate edges)."""
    edges = _normalize_edges(edges, n)
    if len(np.unique(edges, axis=0)) != len(edges):
        return False
    count, _ = connected_components(n, edges)
    return len(edges) == n - count


@dataclass(frozen=True)
class SpanningTree:
    """
    Spanning tree over n nodes.

    Attributes:
        n: Number of nodes
        edges: (n-1, 2) array of (i, j) with i < j
        weights: Edge weights aligned with edges
    """
    n: int
    edges: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        edges = _normalize_edges(self.edges, self.n)
        weights = np.asarray(self.weights, dtype=float).ravel()
        if len(edges) != self.n - 1:
            raise InvalidInput(f"A spanning tree on {self.n} nodes has {self.n - 1} edges, got {len(edges)}")
        if len(weights) != len(edges):
            raise InvalidInput("Weights must align with edges")
        count, _ = connected_components(self.n, edges)
        if count != 1:
            raise DisconnectedGraph(f"Edges do not connect all {self.n} nodes")
        edges.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def edge_set(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((int(i), int(j)) for i, j in self.edges)


RowKey = Callable[[int], np.ndarray]


def _prim(n: int, row_key: RowKey) -> Tuple[np.ndarray, np.ndarray]:
    """
    Minimum spanning tree under the total order (key, min(i,j), max(i,j)).

    Args:
        n: Node count
        row_key: row_key(u) -> keys of edges (u, v) for all v; inf = no edge

    Returns:
        (edges, keys) in the order edges were added
    """
    nodes = np.arange(n)
    in_tree = np.zeros(n, dtype=bool)
    best_key = np.full(n, np.inf)
    best_lo = np.full(n, n, dtype=np.int64)
    best_hi = np.full(n, n, dtype=np.int64)

    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    keys = np.empty(max(n - 1, 0))

    current = 0
    in_tree[0] = True
    for step in range(n - 1):
        key = row_key(current)
        lo = np.minimum(nodes, current)
        hi = np.maximum(nodes, current)
        better = (key < best_key) | (
            (key == best_key) & ((lo < best_lo) | ((lo == best_lo) & (hi < best_hi)))
        )
        better &= ~in_tree
        best_key[better] = key[better]
        best_lo[better] = lo[better]
        best_hi[better] = hi[better]

        candidates = np.where(in_tree, np.inf, best_key)
        smallest = candidates.min()
        if not np.isfinite(smallest):
            raise DisconnectedGraph(
                f"Graph is disconnected: only {int(in_tree.sum())} of {n} nodes reachable from node 0"
            )
        ties = np.flatnonzero(candidates == smallest)
        if ties.size > 1:
            ties = ties[np.lexsort((best_hi[ties], best_lo[ties]))]
        nxt = int(ties[0])

        edges[step] = (best_lo[nxt], best_hi[nxt])
        keys[step] = smallest
        in_tree[nxt] = True
        current = nxt

    return edges, keys


def _sorted_tree(n: int, edges: np.ndarray, weights: np.ndarray) -> SpanningTree:
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return SpanningTree(n=n, edges=edges[order], weights=weights[order])


def maximum_spanning_tree(e: SimilarityGraph) -> SpanningTree:
    """
    Spanning tree of maximal total similarity.

    Edges are ordered by distance when the graph remembers the distances it
    was built from (the Gaussian kernel is monotone, and distances do not
    underflow), otherwise by weight. Ties break by lowest (i, j).

    Raises:
        DisconnectedGraph: A sparse graph does not connect every node
    """
    n = e.n
    if e.distances is not None:
        source = np.asarray(e.distances, dtype=float)
    else:
        source = -np.asarray(e.weights)
    adjacency = e.adjacency()

    def row_key(u: int) -> np.ndarray:
        return np.where(adjacency[u], source[u], np.inf)

    edges, _ = _prim(n, row_key)
    weights = np.asarray(e.weights)[edges[:, 0], edges[:, 1]]
    return _sorted_tree(n, edges, weights)


def euclidean_row(values: np.ndarray, u: int) -> np.ndarray:
    """Euclidean distances from unit u to every unit."""
    diff = values - values[u]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def euclidean_spanning_tree(
    X: CovariateMatrix,
    weight_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
) -> SpanningTree:
    """
    Minimum Euclidean spanning tree of the units, computed without an n x n matrix.

    Args:
        X: Covariates
        weight_fn: Maps edge distances to edge weights (default: the distances)

    Returns:
        SpanningTree whose edges are the distance-minimizing tree
    """
    values = X.values

    def row_key(u: int) -> np.ndarray:
        row = euclidean_row(values, u)
        row[u] = np.inf
        return row

    edges, distances = _prim(X.n, row_key)
    weights = distances if weight_fn is None else weight_fn(distances)
    logger.debug("Euclidean spanning tree over %d units, total distance %.6g", X.n, distances.sum())
    return _sorted_tree(X.n, edges, np.asarray(weights, dtype=float))


def edge_distances(X: CovariateMatrix, edges: np.ndarray) -> np.ndarray:
    """Euclidean length of each edge."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    diff = X.values[edges[:, 0]] - X.values[edges[:, 1]]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def write_support_graph(
    edges: np.ndarray,
    weights: np.ndarray,
    path: Union[str, Path]
) -> None:
    """Write an edge list as CSV with columns (i, j, weight), 0-based indices."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    frame = pd.DataFrame({
        "i": edges[:, 0],
        "j": edges[:, 1],
        "weight": np.asarray(weights, dtype=float),
    })
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def load_support_graph(path: Union[str, Path], n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Read an (i, j, weight) edge list; returns (edges, weights)."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(str(path))
    frame = pd.read_csv(path)
    missing = [c for c in ("i", "j", "weight") if c not in frame.columns]
    if missing:
        raise InvalidInput(f"{path} is missing columns {missing}")
    edges = _normalize_edges(frame[["i", "j"]].to_numpy(), n)
    weights = frame["weight"].to_numpy(dtype=float)
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise InvalidInput(f"{path}: weights must be finite and nonnegative")
    return edges, weights


def require_forest(n: int, edges: np.ndarray) -> np.ndarray:
    """Return normalized edges or raise CycleDetected."""
    edges = _normalize_edges(edges, n)
    if not is_forest(n, edges):
        raise CycleDetected(f"Graph with {len(edges)} edges on {n} nodes contains a cycle")
    return edges
