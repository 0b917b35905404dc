"""
Graph Module.

Distances, Gaussian similarities, spanning trees, the 1-NN forest, the graph
Laplacian and cut weights.
"""

from src.graph.distances import (
    DistanceMatrix,
    SimilarityGraph,
    gaussian_similarity,
    gram_matrix,
    median_bandwidth,
    median_bandwidth_points,
    pairwise_distances,
)
from src.graph.spanning_tree import (
    SpanningTree,
    connected_components,
    euclidean_spanning_tree,
    maximum_spanning_tree,
)
from src.graph.neighbors import NearestNeighborForest, nearest_neighbor_forest
from src.graph.laplacian import GraphLaplacian, cut_weight, graph_laplacian

__all__ = [
    "DistanceMatrix",
    "SimilarityGraph",
    "gaussian_similarity",
    "gram_matrix",
    "median_bandwidth",
    "median_bandwidth_points",
    "pairwise_distances",
    "SpanningTree",
    "connected_components",
    "euclidean_spanning_tree",
    "maximum_spanning_tree",
    "NearestNeighborForest",
    "nearest_neighbor_forest",
    "GraphLaplacian",
    "cut_weight",
    "graph_laplacian",
]
