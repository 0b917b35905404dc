"""
Baseline Designs - Randomization Without a Support Graph.

- Bernoulli: an independent fair coin per unit
- Complete randomization: exactly floor(n/2) treated, uniformly at random
- Rerandomization: complete randomizations redrawn until the Mahalanobis
  balance falls below a pilot-estimated quantile
"""

import logging
from typing import Tuple

import numpy as np

from src.balance.statistics import MahalanobisBalance
from src.core.sample import Assignment, CovariateMatrix
from src.core.seeds import DEFAULT_SEED, SeedLike, make_rng
from src.designs.base import BaseDesign
from src.designs.design import Design
from src.designs.types import DesignMethod
from src.errors import ConfigError, InvalidInput, MaxDrawsExceeded

logger = logging.getLogger(__name__)

MAX_DRAWS = 1_000_000
DEFAULT_PILOT = 500


def bernoulli(n: int, seed: SeedLike = DEFAULT_SEED) -> Assignment:
    """Independent fair coin per unit."""
    if n < 1:
        raise InvalidInput(f"Bernoulli design needs n >= 1, got {n}")
    return Assignment(make_rng(seed).integers(0, 2, size=n))


def complete_randomization(n: int, seed: SeedLike = DEFAULT_SEED) -> Assignment:
    """Exactly floor(n/2) treated units, uniformly among such vectors."""
    if n < 2:
        raise InvalidInput(f"Complete randomization needs n >= 2, got {n}")
    a = np.zeros(n, dtype=np.int8)
    a[make_rng(seed).permutation(n)[: n // 2]] = 1
    return Assignment(a)


def _rerandomize(
    X: CovariateMatrix,
    accept_frac: float,
    pilot: int,
    seed: SeedLike,
    max_draws: int
) -> Tuple[Assignment, float, int]:
    """Rerandomization returning (assignment, threshold, draws after the pilot)."""
    if not 0 < accept_frac <= 1:
        raise ConfigError(f"accept_frac must lie in (0, 1], got {accept_frac}")
    if pilot < 1:
        raise ConfigError(f"pilot must be >= 1, got {pilot}")
    rng = make_rng(seed)
    n = X.n

    if accept_frac >= 1:
        return complete_randomization(n, rng), float("inf"), 1

    balance = MahalanobisBalance(X)
    scores = np.array([balance(complete_randomization(n, rng)) for _ in range(pilot)])
    threshold = float(np.quantile(scores, accept_frac))
    logger.debug("Rerandomization threshold %.6g from %d pilot draws", threshold, pilot)

    for draw in range(1, max_draws + 1):
        candidate = complete_randomization(n, rng)
        if balance(candidate) <= threshold:
            logger.debug("Rerandomization accepted draw %d", draw)
            return candidate, threshold, draw
    raise MaxDrawsExceeded(
        f"No assignment with Mahalanobis balance <= {threshold:.6g} in {max_draws} draws"
    )


def rerandomize(
    X: CovariateMatrix,
    accept_frac: float = 0.01,
    pilot: int = DEFAULT_PILOT,
    seed: SeedLike = DEFAULT_SEED,
    max_draws: int = MAX_DRAWS
) -> Assignment:
    """
    Mahalanobis rerandomization.

    Args:
        X: Covariates
        accept_frac: Acceptance quantile in (0, 1]; 1 accepts the first draw
        pilot: Complete randomizations used to estimate the threshold
        seed: Seed or generator
        max_draws: Cap on draws after the pilot

    Returns:
        First complete randomization whose balance is at most the
        accept_frac quantile of the pilot balances

    Raises:
        MaxDrawsExceeded: No draw accepted within max_draws
    """
    assignment, _, _ = _rerandomize(X, accept_frac, pilot, seed, max_draws)
    return assignment


class BernoulliDesign(BaseDesign):
    """Fair coin per unit; covariates only fix n."""

    method = DesignMethod.BERNOULLI

    def prepare(self, X: CovariateMatrix) -> CovariateMatrix:
        return X

    def build(self, X: CovariateMatrix, seed: int) -> Design:
        return Design(assignment=bernoulli(X.n, seed), method=self.method, seed=seed)


class CompleteDesign(BaseDesign):
    """Complete randomization with floor(n/2) treated."""

    method = DesignMethod.COMPLETE

    def prepare(self, X: CovariateMatrix) -> CovariateMatrix:
        return X

    def build(self, X: CovariateMatrix, seed: int) -> Design:
        return Design(assignment=complete_randomization(X.n, seed), method=self.method, seed=seed)


class RerandomizeDesign(BaseDesign):
    """Mahalanobis rerandomization; the threshold and draw count go into the metadata."""

    method = DesignMethod.RERANDOMIZE

    def build(self, X: CovariateMatrix, seed: int) -> Design:
        config = self.config
        assignment, threshold, draws = _rerandomize(
            X, config.accept_frac, config.pilot, seed, config.max_draws
        )
        return Design(
            assignment=assignment,
            method=self.method,
            seed=seed,
            metadata={
                "accept_frac": float(config.accept_frac),
                "threshold": None if np.isinf(threshold) else threshold,
                "draws": int(draws),
            },
        )
