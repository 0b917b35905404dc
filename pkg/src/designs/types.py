"""Design method enumeration."""

from enum import Enum


class DesignMethod(Enum):
    """
    Treatment assignment mechanisms.

    Graph designs (a support graph whose edges all cross arms):
    - SOFTBLOCK: Maxcut of the maximum spanning tree of similarities
    - GREEDY_NEIGHBORS: Maxcut of the 1-nearest-neighbour forest
    - MATCHED_PAIRS: Greedy similarity matching, one treated unit per pair

    Baselines without a support graph:
    - BERNOULLI, COMPLETE, RERANDOMIZE
    """
    SOFTBLOCK = "softblock"
    GREEDY_NEIGHBORS = "greedy"
    BERNOULLI = "bernoulli"
    COMPLETE = "complete"
    RERANDOMIZE = "rerandomize"
    MATCHED_PAIRS = "matchedpairs"

    @classmethod
    def parse(cls, name: "str | DesignMethod") -> "DesignMethod":
        """Look up by value or member name, case-insensitively."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        for method in cls:
            if method.value == key or method.name.lower() == key:
                return method
        raise ValueError(f"Unknown design method: {name!r}. Choose from {cls.values()}")

    @classmethod
    def values(cls) -> list:
        return [m.value for m in cls]

    @classmethod
    def graph_designs(cls) -> list:
        return [cls.SOFTBLOCK, cls.GREEDY_NEIGHBORS, cls.MATCHED_PAIRS]

    @property
    def has_support_graph(self) -> bool:
        return self in self.graph_designs()
