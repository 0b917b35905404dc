"""
Matched-Pairs Design.

Greedy similarity matching: scan all pairs from most to least similar and
accept a pair when both units are still free. This is a 1/2-approximation
of the maximum-weight matching; within each pair a fair coin picks the
treated unit.
"""

import logging
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist

from src.core.sample import Assignment, CovariateMatrix
from src.core.seeds import DEFAULT_SEED, make_rng
from src.designs.base import Bandwidth, BaseDesign, DesignConfig
from src.designs.design import Design
from src.designs.types import DesignMethod
from src.errors import InvalidInput
from src.graph.distances import gaussian_log_kernel
from src.graph.neighbors import nearest_neighbors
from src.graph.spanning_tree import edge_distances

logger = logging.getLogger(__name__)

MATCH_CHUNK = 65536


def greedy_matching(X: CovariateMatrix, exclude: Optional[int] = None) -> np.ndarray:
    """
    Greedy matching by ascending distance.

    Equal distances are taken in (i, j) order.

    Args:
        X: Covariates
        exclude: Unit kept out of the matching

    Returns:
        (m, 2) array of matched pairs (i < j), in the order accepted
    """
    n = X.n
    d = pdist(X.values, metric="euclidean")
    order = np.argsort(d, kind="stable")
    rows, cols = np.triu_indices(n, k=1)
    rows = rows.astype(np.int32)
    cols = cols.astype(np.int32)

    matched = np.zeros(n, dtype=bool)
    if exclude is not None:
        matched[exclude] = True
    target = int((~matched).sum()) // 2
    pairs = []

    for start in range(0, len(order), MATCH_CHUNK):
        chunk = order[start:start + MATCH_CHUNK]
        i, j = rows[chunk], cols[chunk]
        free = ~(matched[i] | matched[j])
        for p, q in zip(i[free].tolist(), j[free].tolist()):
            if not (matched[p] or matched[q]):
                matched[p] = matched[q] = True
                pairs.append((p, q))
        if len(pairs) == target:
            break

    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


def odd_unit(X: CovariateMatrix) -> int:
    """Unit with the largest nearest-neighbour distance (lowest index on ties)."""
    _, distances = nearest_neighbors(X)
    return int(np.argmax(distances))


class MatchedPairsDesign(BaseDesign):
    """
    Greedy matched pairs.

    With odd n the worst-connected unit is left unmatched and assigned by
    its own coin; it is flagged in the design.
    """

    method = DesignMethod.MATCHED_PAIRS

    def build(self, X: CovariateMatrix, seed: int) -> Design:
        if X.n < 2:
            raise InvalidInput(f"Matched pairs need n >= 2, got {X.n}")
        h = self.resolve_bandwidth(X)
        unmatched = odd_unit(X) if X.n % 2 else None
        if unmatched is not None:
            logger.warning("Odd number of units: unit %d left unmatched", unmatched)

        pairs = greedy_matching(X, exclude=unmatched)
        rng = make_rng(seed)
        first_treated = rng.integers(0, 2, size=len(pairs))

        a = np.zeros(X.n, dtype=np.int8)
        a[pairs[:, 0]] = first_treated
        a[pairs[:, 1]] = 1 - first_treated
        components = np.empty(X.n, dtype=np.int64)
        components[pairs[:, 0]] = np.arange(len(pairs))
        components[pairs[:, 1]] = np.arange(len(pairs))
        if unmatched is not None:
            a[unmatched] = rng.integers(0, 2)
            components[unmatched] = len(pairs)

        lengths = edge_distances(X, pairs)
        return Design(
            assignment=Assignment(a),
            method=self.method,
            seed=seed,
            edges=pairs,
            log_weights=gaussian_log_kernel(lengths, h),
            edge_lengths=lengths,
            bandwidth=h,
            component_ids=components,
            unmatched=unmatched,
        )


def matched_pairs(
    X: CovariateMatrix,
    seed: int = DEFAULT_SEED,
    h: Bandwidth = "auto",
    standardize: bool = True
) -> Design:
    """Functional form of MatchedPairsDesign."""
    config = DesignConfig(bandwidth=h, standardize=standardize)
    return MatchedPairsDesign(config).design(X, seed)


def matching_weight(pairs: np.ndarray, weights: np.ndarray) -> float:
    """Total weight of a matching under a similarity matrix."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return float(np.asarray(weights)[pairs[:, 0], pairs[:, 1]].sum())

