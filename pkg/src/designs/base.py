"""
Base Design Abstract Class.

Defines the interface every assignment mechanism implements, plus the
shared configuration.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import Union

from src.core.dataset import standardize
from src.core.sample import CovariateMatrix
from src.core.seeds import DEFAULT_SEED
from src.designs.design import Design
from src.designs.types import DesignMethod
from src.errors import ConfigError, NonPositiveBandwidth
from src.graph.distances import median_bandwidth_points

logger = logging.getLogger(__name__)

Bandwidth = Union[str, float]


@dataclass
class DesignConfig:
    """
    Settings shared by all designs.

    Attributes:
        bandwidth: "auto" (median heuristic) or a positive float
        standardize: Standardize covariates before any distance computation
        randomize_flip: Draw the global arm flip of each tree component by coin
        accept_frac: Rerandomization acceptance quantile, in (0, 1]
        pilot: Rerandomization pilot draws used to estimate the threshold
        max_draws: Rerandomization draw cap
    """
    bandwidth: Bandwidth = "auto"
    standardize: bool = True
    randomize_flip: bool = True
    accept_frac: float = 0.01
    pilot: int = 500
    max_draws: int = 1_000_000

    def __post_init__(self):
        if isinstance(self.bandwidth, str):
            if self.bandwidth.lower() != "auto":
                try:
                    self.bandwidth = float(self.bandwidth)
                except ValueError:
                    raise ConfigError(f"Bandwidth must be 'auto' or a number, got {self.bandwidth!r}")
            else:
                self.bandwidth = "auto"
        if not isinstance(self.bandwidth, str) and not float(self.bandwidth) > 0:
            raise NonPositiveBandwidth(f"Bandwidth must be positive, got {self.bandwidth}")
        if not 0 < self.accept_frac <= 1:
            raise ConfigError(f"accept_frac must lie in (0, 1], got {self.accept_frac}")
        if self.pilot < 1:
            raise ConfigError(f"pilot must be >= 1, got {self.pilot}")
        if self.max_draws < 1:
            raise ConfigError(f"max_draws must be >= 1, got {self.max_draws}")

    def to_dict(self) -> dict:
        return asdict(self)


class BaseDesign(ABC):
    """
    Abstract base class for assignment mechanisms.

    Subclasses implement build() on already-prepared covariates.
    """

    method: DesignMethod

    def __init__(self, config: DesignConfig = None):
        self.config = config or DesignConfig()

    def prepare(self, X: CovariateMatrix) -> CovariateMatrix:
        """Apply the configured standardization."""
        return standardize(X) if self.config.standardize else X

    def resolve_bandwidth(self, X: CovariateMatrix) -> float:
        """Configured bandwidth, or the median heuristic on X."""
        if self.config.bandwidth == "auto":
            h = median_bandwidth_points(X)
            logger.debug("%s: median-heuristic bandwidth %.6g", self.method.value, h)
            return h
        return float(self.config.bandwidth)

    def design(self, X: CovariateMatrix, seed: int = DEFAULT_SEED) -> Design:
        """
        Produce a design for the given units.

        Args:
            X: Raw covariates (standardized here if configured)
            seed: Seed of the assignment draw

        Returns:
            Design
        """
        design = self.build(self.prepare(X), int(seed))
        logger.info(
            "%s design: n=%d, group sizes %s, %d support edges",
            self.method.value, design.n, design.group_sizes, len(design.edges)
        )
        return design.with_metadata(standardized=bool(self.config.standardize))

    @abstractmethod
    def build(self, X: CovariateMatrix, seed: int) -> Design:
        """Build the design on prepared covariates."""
