"""
Experiment Designer.

Single entry point over every assignment mechanism. The mechanism can be
switched after construction; the configuration is shared.
"""

from typing import List, Optional, Union

from src.core.sample import CovariateMatrix
from src.core.seeds import DEFAULT_SEED
from src.designs.base import BaseDesign, DesignConfig
from src.designs.design import Design
from src.designs.matching import MatchedPairsDesign
from src.designs.randomized import BernoulliDesign, CompleteDesign, RerandomizeDesign
from src.designs.tree_designs import GreedyNeighborsDesign, SoftBlockDesign
from src.designs.types import DesignMethod


class ExperimentDesigner:
    """
    Treatment assignment for covariate-described units.

    Example:
        >>> designer = ExperimentDesigner(method='softblock')
        >>> design = designer.design(X, seed=7)
        >>> design.group_sizes
    """

    def __init__(
        self,
        method: Union[str, DesignMethod] = DesignMethod.SOFTBLOCK,
        config: Optional[DesignConfig] = None
    ):
        """
        Initialize the designer.

        Args:
            method: Assignment mechanism (see DesignMethod.values())
            config: Shared design settings (default: DesignConfig())
        """
        self.config = config or DesignConfig()
        self.method = DesignMethod.parse(method)
        self._design = self._create_design(self.method)

    def _create_design(self, method: DesignMethod) -> BaseDesign:
        design_map = {
            DesignMethod.SOFTBLOCK: SoftBlockDesign,
            DesignMethod.GREEDY_NEIGHBORS: GreedyNeighborsDesign,
            DesignMethod.BERNOULLI: BernoulliDesign,
            DesignMethod.COMPLETE: CompleteDesign,
            DesignMethod.RERANDOMIZE: RerandomizeDesign,
            DesignMethod.MATCHED_PAIRS: MatchedPairsDesign,
        }
        return design_map[method](self.config)

    def switch_method(self, method: Union[str, DesignMethod]) -> None:
        """Switch to another mechanism, keeping the configuration."""
        self.method = DesignMethod.parse(method)
        self._design = self._create_design(self.method)

    def design(self, X: CovariateMatrix, seed: int = DEFAULT_SEED) -> Design:
        """
        Assign units to arms.

        Args:
            X: Covariates (one row per unit)
            seed: Seed of the draw; the same (X, config, seed) gives the same design

        Returns:
            Design
        """
        return self._design.design(X, seed)

    @property
    def current_method(self) -> str:
        return self.method.value

    @staticmethod
    def supported_methods() -> List[DesignMethod]:
        return list(DesignMethod)
