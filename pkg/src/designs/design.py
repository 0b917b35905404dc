"""
Design Data Structure.

An assignment plus the sparse support graph (tree, forest or matching) whose
cut edges define the counterfactual-imputation weights.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from src.core.dataset import write_assignment
from src.core.sample import Assignment
from src.designs.types import DesignMethod
from src.errors import InvalidInput
from src.graph.spanning_tree import write_support_graph


@dataclass(frozen=True)
class Design:
    """
    Container for a realised experimental design.

    Attributes:
        assignment: Treatment assignment
        method: Mechanism that produced it
        seed: Seed the assignment was drawn with
        edges: (m, 2) support-graph edges with i < j (empty for baselines)
        log_weights: Log similarity of every support edge
        edge_lengths: Covariate distance of every support edge, if known
        bandwidth: Gaussian bandwidth behind log_weights, if any
        component_ids: Support-graph component of every unit
        unmatched: Unit left out of a matching (odd n), if any
        metadata: Extra values reported in the design JSON
    """
    assignment: Assignment
    method: DesignMethod
    seed: int
    edges: np.ndarray = field(default_factory=lambda: np.empty((0, 2), dtype=np.int64))
    log_weights: np.ndarray = field(default_factory=lambda: np.empty(0))
    edge_lengths: Optional[np.ndarray] = None
    bandwidth: Optional[float] = None
    component_ids: Optional[np.ndarray] = None
    unmatched: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        edges = np.sort(np.asarray(self.edges, dtype=np.int64).reshape(-1, 2), axis=1)
        log_weights = np.asarray(self.log_weights, dtype=float).ravel()
        if len(log_weights) != len(edges):
            raise InvalidInput("log_weights must align with edges")
        if edges.size and (edges.min() < 0 or edges.max() >= self.assignment.n):
            raise InvalidInput("Support-graph edges reference units outside the assignment")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "log_weights", log_weights)
        if self.component_ids is None:
            object.__setattr__(self, "component_ids", np.zeros(self.assignment.n, dtype=np.int64))

    @classmethod
    def from_support_graph(
        cls,
        assignment: Assignment,
        edges: np.ndarray,
        weights: np.ndarray,
        method: DesignMethod = DesignMethod.SOFTBLOCK,
        seed: int = 0
    ) -> "Design":
        """Rebuild a design from an assignment and an (i, j, weight) edge list."""
        with np.errstate(divide="ignore"):
            log_weights = np.log(np.asarray(weights, dtype=float))
        return cls(assignment=assignment, method=method, seed=seed, edges=edges, log_weights=log_weights)

    @property
    def n(self) -> int:
        return self.assignment.n

    @property
    def weights(self) -> np.ndarray:
        """Support-edge similarities."""
        return np.exp(self.log_weights)

    @property
    def group_sizes(self) -> Tuple[int, int]:
        return self.assignment.group_sizes

    @property
    def n_components(self) -> int:
        return int(np.max(self.component_ids)) + 1

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def cut_mask(self) -> np.ndarray:
        """True for support edges whose endpoints sit in different arms."""
        a = self.assignment.a
        return a[self.edges[:, 0]] != a[self.edges[:, 1]]

    def all_edges_cut(self) -> bool:
        return bool(self.cut_mask().all())

    def pairs(self) -> np.ndarray:
        """Matched pairs as (treated, control) rows."""
        a = self.assignment.a
        first_treated = a[self.edges[:, 0]] == 1
        treated = np.where(first_treated, self.edges[:, 0], self.edges[:, 1])
        control = np.where(first_treated, self.edges[:, 1], self.edges[:, 0])
        return np.column_stack([treated, control])

    def with_metadata(self, **values) -> "Design":
        merged = dict(self.metadata)
        merged.update(values)
        return Design(
            assignment=self.assignment,
            method=self.method,
            seed=self.seed,
            edges=self.edges,
            log_weights=self.log_weights,
            edge_lengths=self.edge_lengths,
            bandwidth=self.bandwidth,
            component_ids=self.component_ids,
            unmatched=self.unmatched,
            metadata=merged,
        )

    def to_dict(self) -> dict:
        """Summary for the design JSON."""
        n1, n0 = self.group_sizes
        data = {
            "method": self.method.value,
            "seed": int(self.seed),
            "n": int(self.n),
            "bandwidth": None if self.bandwidth is None else float(self.bandwidth),
            "group_sizes": [int(n1), int(n0)],
            "n_edges": int(len(self.edges)),
            "n_components": self.n_components,
            "total_weight": self.total_weight,
            "unmatched": None if self.unmatched is None else int(self.unmatched),
        }
        data.update(self.metadata)
        return data

    def save(self, directory: Union[str, Path]) -> Dict[str, Path]:
        """
        Write assignment.csv, graph.csv and design.json into a directory.

        Returns:
            Mapping of artifact name to path
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = {
            "assignment": directory / "assignment.csv",
            "graph": directory / "graph.csv",
            "design": directory / "design.json",
        }
        write_assignment(self.assignment, paths["assignment"], self.component_ids)
        write_support_graph(self.edges, self.weights, paths["graph"])
        with open(paths["design"], "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return paths
