"""Graph Laplacian and cut weights."""

from dataclasses import dataclass

import numpy as np

from src.core.sample import Assignment
from src.errors import LengthMismatch
from src.graph.distances import SimilarityGraph


@dataclass(frozen=True)
class GraphLaplacian:
    """L = D - G with D the diagonal degree matrix of G."""
    L: np.ndarray

    @property
    def n(self) -> int:
        return self.L.shape[0]

    def quadratic_form(self, u: np.ndarray) -> float:
        u = np.asarray(u, dtype=float)
        return float(u @ self.L @ u)


def graph_laplacian(e: SimilarityGraph) -> GraphLaplacian:
    """Combinatorial Laplacian of a similarity graph."""
    G = np.asarray(e.weights)
    L = np.diag(G.sum(axis=1)) - G
    L.setflags(write=False)
    return GraphLaplacian(L)


def cut_weight(e: SimilarityGraph, a: Assignment) -> float:
    """Total weight of edges whose endpoints are in different arms (each unordered pair once)."""
    if a.n != e.n:
        raise LengthMismatch(f"Assignment has {a.n} units, graph has {e.n} nodes")
    treated = a.treated
    return float(np.asarray(e.weights)[np.ix_(treated, ~treated)].sum())


def edge_cut_weight(edges: np.ndarray, weights: np.ndarray, a: Assignment) -> float:
    """Cut weight of an edge-list graph."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    crossing = a.a[edges[:, 0]] != a.a[edges[:, 1]]
    return float(np.asarray(weights, dtype=float)[crossing].sum())
