"""
Data-Generating Processes.

Synthetic experiments with both potential outcomes known:

- LINEAR: X ~ N(0, I_4); y(a) = a + X beta + eps_a / 10
- QUICKBLOCK: X ~ U(0, 10)^2; y(0) = x1 x2 + eps; y(1) = 1 + y(0)
- SINUSOIDAL: X ~ N(0, I_4); y(a) = a + sin(X beta) + eps_a / 10
- TWOCIRCLES: radius r ~ N(1 + i % 2, 0.1), angle s ~ U(0, 2 pi),
  X = (r cos s, r sin s); y(a) = beta1 s + beta2 r + eps_a

beta ~ U(0, 1) per draw, eps standard normal.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np

from src.core.sample import Assignment, CovariateMatrix, OutcomeVector, check_lengths
from src.core.seeds import DEFAULT_SEED, make_rng
from src.errors import InvalidInput, UnknownDgp

logger = logging.getLogger(__name__)


class DGPType(Enum):
    """Simulation data-generating processes."""
    LINEAR = "linear"
    QUICKBLOCK = "quickblock"
    SINUSOIDAL = "sinusoidal"
    TWOCIRCLES = "twocircles"

    @classmethod
    def parse(cls, name: "str | DGPType") -> "DGPType":
        """Look up by value or member name, case-insensitively."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "").replace("dgp", "")
        for dgp in cls:
            if dgp.value == key:
                return dgp
        raise UnknownDgp(f"Unknown data-generating process: {name!r}. Choose from {cls.values()}")

    @classmethod
    def values(cls) -> list:
        return [d.value for d in cls]


@dataclass(frozen=True)
class DGPConfig:
    """Static description of a data-generating process."""
    name: str
    dgp_type: DGPType
    dimension: int
    true_effect: float
    noise_sd: float
    lipschitz: str  # rule for the Lipschitz constant of the mean functions
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dgp": self.dgp_type.value,
            "dimension": self.dimension,
            "true_effect": self.true_effect,
            "noise_sd": self.noise_sd,
            "lipschitz": self.lipschitz,
            "description": self.description,
        }


DGP_CONFIGS: Dict[DGPType, DGPConfig] = {
    DGPType.LINEAR: DGPConfig(
        name="LinearDGP",
        dgp_type=DGPType.LINEAR,
        dimension=4,
        true_effect=1.0,
        noise_sd=0.1,
        lipschitz="norm(beta)",
        description="Linear outcome, constant unit effect",
    ),
    DGPType.QUICKBLOCK: DGPConfig(
        name="QuickBlockDGP",
        dgp_type=DGPType.QUICKBLOCK,
        dimension=2,
        true_effect=1.0,
        noise_sd=1.0,
        lipschitz="none",
        description="Product of two uniform covariates, shared noise across arms",
    ),
    DGPType.SINUSOIDAL: DGPConfig(
        name="SinusoidalDGP",
        dgp_type=DGPType.SINUSOIDAL,
        dimension=4,
        true_effect=1.0,
        noise_sd=0.1,
        lipschitz="norm(beta)",
        description="Sine of a linear index, constant unit effect",
    ),
    DGPType.TWOCIRCLES: DGPConfig(
        name="TwoCircles",
        dgp_type=DGPType.TWOCIRCLES,
        dimension=2,
        true_effect=0.0,
        noise_sd=1.0,
        lipschitz="none",
        description="Two concentric noisy circles, no treatment effect",
    ),
}


def get_dgp_config(dgp: "str | DGPType") -> DGPConfig:
    """Registry lookup."""
    return DGP_CONFIGS[DGPType.parse(dgp)]


@dataclass(frozen=True)
class SimData:
    """
    One simulated sample with both potential outcomes.

    Attributes:
        X: Covariates
        y0: Outcomes under control
        y1: Outcomes under treatment
        tau: True ITE from the noiseless mean functions
        dgp: Process that generated the sample
        seed: Seed of the draw
        beta: Coefficients drawn for this sample
        lipschitz: Lipschitz constant of the mean functions, when finite
        latent: Latent variables (TwoCircles radius and angle)
    """
    X: CovariateMatrix
    y0: OutcomeVector
    y1: OutcomeVector
    tau: np.ndarray
    dgp: DGPType
    seed: int
    beta: np.ndarray
    lipschitz: Optional[float] = None
    latent: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.n

    @property
    def true_ate(self) -> float:
        """Sample ATE: mean of the true ITE over the realised units."""
        return float(np.mean(self.tau))

    def reveal(self, a: Assignment) -> OutcomeVector:
        """Observed outcomes: y1 where treated, y0 where control."""
        check_lengths(self.y0, a)
        return OutcomeVector(np.where(a.treated, self.y1.y, self.y0.y))


def generate(
    dgp: "str | DGPType",
    n: int,
    seed: int = DEFAULT_SEED,
    noise_scale: float = 1.0
) -> SimData:
    """
    Draw a sample from a data-generating process.

    Args:
        dgp: Process to draw from
        n: Number of units (>= 2)
        seed: Seed of the draw
        noise_scale: Multiplier on the outcome noise (0 gives noiseless outcomes)

    Returns:
        SimData

    Raises:
        UnknownDgp: Unrecognised process name
    """
    dgp = DGPType.parse(dgp)
    if n < 2:
        raise InvalidInput(f"Simulation needs n >= 2, got {n}")
    config = DGP_CONFIGS[dgp]
    rng = make_rng(seed)
    latent = {}

    if dgp in (DGPType.LINEAR, DGPType.SINUSOIDAL):
        X = rng.standard_normal((n, config.dimension))
        beta = rng.uniform(size=config.dimension)
        index = X @ beta
        mean0 = index if dgp is DGPType.LINEAR else np.sin(index)
        eps0 = rng.standard_normal(n) * config.noise_sd * noise_scale
        eps1 = rng.standard_normal(n) * config.noise_sd * noise_scale
        y0 = mean0 + eps0
        y1 = 1.0 + mean0 + eps1
        tau = np.full(n, 1.0)
        lipschitz = float(np.linalg.norm(beta))
    elif dgp is DGPType.QUICKBLOCK:
        X = rng.uniform(0.0, 10.0, size=(n, config.dimension))
        beta = np.empty(0)
        eps = rng.standard_normal(n) * config.noise_sd * noise_scale
        y0 = X[:, 0] * X[:, 1] + eps
        y1 = 1.0 + y0
        tau = np.full(n, 1.0)
        lipschitz = None
    else:
        r = rng.normal(1.0 + np.arange(n) % 2, 0.1)
        s = rng.uniform(0.0, 2.0 * np.pi, size=n)
        X = np.column_stack([r * np.cos(s), r * np.sin(s)])
        beta = rng.uniform(size=2)
        mean = beta[0] * s + beta[1] * r
        y0 = mean + rng.standard_normal(n) * config.noise_sd * noise_scale
        y1 = mean + rng.standard_normal(n) * config.noise_sd * noise_scale
        tau = np.zeros(n)
        lipschitz = None
        latent = {"r": r, "s": s}

    return SimData(
        X=CovariateMatrix(X),
        y0=OutcomeVector(y0),
        y1=OutcomeVector(y1),
        tau=tau,
        dgp=dgp,
        seed=int(seed),
        beta=beta,
        lipschitz=lipschitz,
        latent=latent,
    )
